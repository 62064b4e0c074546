// Field sources, report schemas, and the restriction_lab binary end to end.
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rlab/fields.hpp"
#include "rlab/functional.hpp"
#include "rlab/report_io.hpp"

using namespace rlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("rlab_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string cli() {
  const char* p = std::getenv("RLAB_CLI");
  return p ? p : "";
}

int run(const std::string& args) {
  const int status = std::system((cli() + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string slurp_without_timestamp(const std::string& path) {
  std::ifstream in(path);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
  return out;
}

const char* kSmall = "-L 4 --n-polar 8 --n-azimuthal 16 --n-radial 12 --n-circle 16";

}  // namespace

TEST_CASE("field sources") {
  const Discretization d = Discretization::build(Resolution{8, 16, 12, 16, 4});
  CHECK(parse_field_source("constant").kind == FieldSource::Kind::constant);
  const FieldSource h = parse_field_source("harmonic:3,-2");
  CHECK(h.kind == FieldSource::Kind::harmonic);
  CHECK(h.l == 3);
  CHECK(h.m == -2);
  const FieldSource m = parse_field_source("modulated-constant:0,2,0.5");
  CHECK(norm(m.xi - Vec3{0, 2, 0.5}) == 0.0);
  const SphereField f = build_field(m, d);
  CHECK(std::abs(f[0]) == doctest::Approx(1.0));

  CHECK_THROWS_AS(parse_field_source("harmonic:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_source("harmonic:2,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_source("harmonic:1.5,0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_source("modulated-constant:1,x,0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_source("no-such-thing"), std::invalid_argument);
  CHECK_THROWS_AS(check_field_source(parse_field_source("harmonic:5,0"), 4), std::invalid_argument);
}

TEST_CASE("spectrum csv as a field source") {
  TempDir tmp;
  const Discretization d = Discretization::build(Resolution{8, 16, 12, 16, 4});
  const SphereField g = random_band_limited(2, 3, d, true);
  {
    std::ofstream out(tmp / "s.csv");
    write_spectrum_csv(out, analyze(g, 3));
  }
  const SphereField back = build_field(parse_field_source(tmp / "s.csv"), d);
  CHECK(l2_norm(back - g) < 1e-12 * l2_norm(g));

  {
    std::ofstream out(tmp / "bad.csv");
    out << "l,m,re,im\n0,0,abc,0\n";
  }
  CHECK_THROWS(parse_field_source(tmp / "bad.csv"));
}

TEST_CASE("functional report json keys") {
  const FunctionalReport r{1.0, 2.0, 3.0, 4.0, {5.0, 6.0}};
  const json j = to_json(r);
  CHECK(j.size() == 5u);
  for (const char* key : {"q_value", "lambda_value", "multiplier_estimate", "el_residual_rel", "norms"})
    CHECK(j.contains(key));
  CHECK(j.at("norms").size() == 2u);
  const FunctionalReport back = functional_report_from_json(json::parse(j.dump()));
  CHECK(back.norms.l2_conv == 6.0);
  CHECK(back.el_residual_rel == 4.0);
}

TEST_CASE("restriction_lab end to end") {
  REQUIRE_MESSAGE(!cli().empty(), "RLAB_CLI is not set");
  TempDir tmp;

  SUBCASE("eval") {
    REQUIRE(run("eval --field constant -o " + tmp / "e.json") == 0);
    const json j = load(tmp / "e.json");
    CHECK(j.at("report").at("q_value").get<double>() == doctest::Approx(2.5066283).epsilon(1e-7));
    CHECK(j.at("config").at("field") == "constant");
    CHECK(j.contains("timestamp"));

    REQUIRE(run("eval --field constant --oracle -o " + tmp / "o.json") == 0);
    const json o = load(tmp / "o.json").at("report").at("oracle");
    CHECK(o.at("lambda_oracle").get<double>() > 0.0);
    CHECK(o.at("tail_bound").get<double>() > 0.0);
  }

  SUBCASE("validation errors exit with 2 and write nothing") {
    CHECK(run("eval --field bogus -o " + tmp / "x.json") == 2);
    CHECK(run("eval --field harmonic:9,0 -o " + tmp / "x.json") == 2);
    CHECK(run("eval --n-azimuthal 7 -o " + tmp / "x.json") == 2);
    CHECK(run("solve --tol -1 -o " + tmp / "x.json") == 2);
    CHECK(run("solve --init sideways -o " + tmp / "x.json") == 2);
    CHECK(run("phase --xi-max 0 -o " + tmp / "x.json") == 2);
    CHECK(run("eval -o " + tmp / "missing/dir/x.json") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK_FALSE(fs::exists(tmp / "x.json"));
  }

  SUBCASE("solve from the constant") {
    REQUIRE(run(std::string("solve --init constant ") + kSmall + " -o " + tmp / "s.json --history " + tmp / "h.csv" +
                " --spectrum " + tmp / "sp.csv") == 0);
    const json j = load(tmp / "s.json");
    CHECK(j.at("report").at("converged").get<bool>());
    CHECK(j.at("report").at("iterations").get<int>() <= 2);
    std::ifstream h(tmp / "h.csv");
    std::string header;
    std::getline(h, header);
    CHECK(header == "iter,residual,q,lambda");

    // the dumped spectrum feeds back into eval
    REQUIRE(run(std::string("eval ") + kSmall + " --field " + tmp / "sp.csv" + " -o " + tmp / "e.json") == 0);
    CHECK(load(tmp / "e.json").at("report").at("q_value").get<double>() ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-8));
  }

  SUBCASE("seeded solve is deterministic and refinement is reported") {
    const std::string args = std::string("solve --init perturbed:0.05 --seed 7 --refine ") + kSmall;
    REQUIRE(run(args + " -o " + tmp / "a.json") == 0);
    REQUIRE(run(args + " --threads 1 -o " + tmp / "b.json") == 0);
    CHECK(slurp_without_timestamp(tmp / "a.json") == slurp_without_timestamp(tmp / "b.json"));
    const json c = load(tmp / "a.json").at("report").at("contraction");
    CHECK(c.at("contraction_ratio").get<double>() < 1.0);
  }

  SUBCASE("non-convergence exits with 3 and still reports") {
    CHECK(run(std::string("solve --init perturbed:0.3 --max-iters 3 ") + kSmall + " -o " + tmp / "n.json") == 3);
    CHECK_FALSE(load(tmp / "n.json").at("report").at("converged").get<bool>());
  }

  SUBCASE("config file with flag override") {
    {
      std::ofstream cfg(tmp / "run.toml");
      cfg << "[solve]\ninit = \"perturbed:0.05\"\nmax-iters = 5\nband-limit = 4\nn-polar = 8\n"
             "n-azimuthal = 16\nn-radial = 12\nn-circle = 16\n";
    }
    CHECK(run("--config " + tmp / "run.toml" + " solve --max-iters 6 -o " + tmp / "c.json") == 3);
    const json j = load(tmp / "c.json");
    CHECK(j.at("config").at("solver").at("max_iters").get<int>() == 6);
    CHECK(j.at("config").at("init") == "perturbed:0.05");
    CHECK(j.at("report").at("iterations").get<int>() == 6);
  }

  SUBCASE("phase") {
    REQUIRE(run("phase --field modulated-constant:0,2,0 -o " + tmp / "p.json") == 0);
    const json r = load(tmp / "p.json").at("report");
    CHECK(r.at("xi").at(1).get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(r.at("xi").at(0).get<double>()) < 1e-9);
    REQUIRE(run("phase --field constant -o " + tmp / "q.json") == 0);
    const json q = load(tmp / "q.json").at("report");
    for (int k = 0; k < 3; ++k) CHECK(q.at("xi").at(k).get<double>() == 0.0);
    CHECK(q.at("residual_rel").get<double>() == 0.0);
  }
}
