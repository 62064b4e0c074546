#include "rlab/fields.hpp"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/phase.hpp"

namespace rlab {

SphereField harmonic_field(int l, int m, const Discretization& d) {
  if (l < 0 || m < -l || m > l) throw std::invalid_argument("harmonic_field: need l >= 0 and |m| <= l");
  if (l > d.band_limit()) throw std::invalid_argument("harmonic_field: degree exceeds the band limit");
  HarmonicSpectrum s(l);
  s.at(l, m) = 1.0;
  return synthesize(s, d.sphere);
}

SphereField random_band_limited(std::uint64_t seed, int band_limit, const Discretization& d, bool complex) {
  if (band_limit < 0 || band_limit > d.band_limit()) throw std::invalid_argument("random_band_limited: bad band limit");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  HarmonicSpectrum s(band_limit);
  for (int l = 0; l <= band_limit; ++l)
    for (int m = -l; m <= l; ++m) {
      const double re = normal(rng);
      s.at(l, m) = complex ? cplx(re, normal(rng)) : cplx(re, 0.0);
    }
  return synthesize(s, d.sphere);
}

}  // namespace rlab

namespace rlab {

namespace {

std::vector<double> parse_numbers(const std::string& list, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("field source: bad number '" + item + "' in " + what);
    out.push_back(v);
  }
  if (out.size() != count) throw std::invalid_argument("field source: " + what + " needs " + std::to_string(count) + " values");
  return out;
}

}  // namespace

FieldSource parse_field_source(const std::string& text) {
  FieldSource src;
  src.text = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (text == "constant") {
    src.kind = FieldSource::Kind::constant;
  } else if (head == "harmonic" && colon != std::string::npos) {
    const auto v = parse_numbers(args, 2, "harmonic:l,m");
    src.kind = FieldSource::Kind::harmonic;
    src.l = static_cast<int>(v[0]);
    src.m = static_cast<int>(v[1]);
    if (src.l != v[0] || src.m != v[1] || src.l < 0 || std::abs(src.m) > src.l) {
      throw std::invalid_argument("field source: harmonic needs integers l >= 0, |m| <= l");
    }
  } else if (head == "modulated-constant" && colon != std::string::npos) {
    const auto v = parse_numbers(args, 3, "modulated-constant:x,y,z");
    src.kind = FieldSource::Kind::modulated_constant;
    src.xi = {v[0], v[1], v[2]};
  } else {
    std::ifstream in(text);
    if (!in) throw std::invalid_argument("field source: unknown builtin or unreadable file '" + text + "'");
    src.kind = FieldSource::Kind::spectrum;
    src.spectrum = read_spectrum_csv(in);
  }
  return src;
}

void check_field_source(const FieldSource& src, int band_limit) {
  if (src.kind == FieldSource::Kind::harmonic && src.l > band_limit) {
    throw std::invalid_argument("field source: degree " + std::to_string(src.l) + " exceeds band limit " +
                                std::to_string(band_limit));
  }
  if (src.kind == FieldSource::Kind::spectrum && src.spectrum.band_limit() > band_limit) {
    throw std::invalid_argument("field source: spectrum band limit " + std::to_string(src.spectrum.band_limit()) +
                                " exceeds band limit " + std::to_string(band_limit));
  }
}

SphereField build_field(const FieldSource& src, const Discretization& d) {
  check_field_source(src, d.band_limit());
  switch (src.kind) {
    case FieldSource::Kind::constant:
      return d.constant(1.0);
    case FieldSource::Kind::harmonic:
      return harmonic_field(src.l, src.m, d);
    case FieldSource::Kind::modulated_constant:
      return modulate(d.constant(1.0), src.xi);
    case FieldSource::Kind::spectrum:
      return synthesize(src.spectrum, d.sphere);
  }
  throw std::logic_error("build_field: unhandled source");
}

}  // namespace rlab
