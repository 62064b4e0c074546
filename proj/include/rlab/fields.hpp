#pragma once

#include <cstdint>
#include <string>

#include "rlab/discretization.hpp"

namespace rlab {

/// Real orthonormal harmonic Y_{l,m} on the discretization's sphere rule.
SphereField harmonic_field(int l, int m, const Discretization& d);

/// sum over l <= band_limit of a_{l,m} Y_{l,m} with a_{l,m} ~ N(0,1) (complex: independent
/// real and imaginary parts), drawn in (l, m) order from mt19937_64(seed).
SphereField random_band_limited(std::uint64_t seed, int band_limit, const Discretization& d, bool complex);

}  // namespace rlab

namespace rlab {

struct FieldSource {
  enum class Kind { constant, harmonic, modulated_constant, spectrum };
  Kind kind = Kind::constant;
  std::string text;
  int l = 0;
  int m = 0;
  Vec3 xi;
  HarmonicSpectrum spectrum;
};

/// "constant", "harmonic:l,m", "modulated-constant:x,y,z", or the path of a spectrum CSV,
/// which is read here. Throws std::invalid_argument for anything else.
FieldSource parse_field_source(const std::string& text);

/// Throws std::invalid_argument if the source needs more than `band_limit`.
void check_field_source(const FieldSource& src, int band_limit);

SphereField build_field(const FieldSource& src, const Discretization& d);

}  // namespace rlab
