#include <doctest.h>

#include <cmath>
#include <set>

#include "sedlab/core.hpp"

using namespace sedlab;

TEST_SUITE("core") {

TEST_CASE("defaults are accepted") {
  SystemParams p;
  GridSpec g;  // dt 0.005, omega_cut 500
  CHECK(check(p, g).empty());
  const auto cfg = validate(p, g);
  CHECK(cfg.warnings.empty());
}

TEST_CASE("damping bound") {
  SystemParams p;
  p.tau = 0.6;
  GridSpec g;
  g.dt = 0.005;
  g.omega_cut = 5;
  try {
    validate(p, g);
    FAIL("expected InvalidParams");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParams);
    CHECK(std::string(e.what()).find("damping") != std::string::npos);
  }
}

TEST_CASE("Nyquist bound") {
  SystemParams p;
  GridSpec g;
  g.dt = 0.01;
  g.omega_cut = 500;  // dt * omega_cut = 5 > pi
  const auto v = check(p, g);
  REQUIRE(v.size() == 1);
  CHECK(v[0].actual == doctest::Approx(5.0));
}

TEST_CASE("every violation is listed") {
  SystemParams p;
  p.hbar = -1;
  p.m = 0;
  p.kT = -1;
  GridSpec g;
  g.dt = -1;
  const auto v = check(p, g);
  CHECK(v.size() >= 4);
  try {
    validate(p, g);
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("hbar") != std::string::npos);
    CHECK(msg.find("m > 0") != std::string::npos);
    CHECK(msg.find("kT") != std::string::npos);
    CHECK(msg.find("dt > 0") != std::string::npos);
  }
}

TEST_CASE("soft damping warning") {
  SystemParams p;
  p.tau = 0.2;
  GridSpec g;
  g.dt = 0.01;
  g.omega_cut = 50;
  g.n_samples = 1 << 17;
  const auto cfg = validate(p, g);
  CHECK(cfg.warnings.size() == 1);
}

TEST_CASE("tau, charge and light speed are linked") {
  SystemParams p;
  // derived values reproduce tau = 2 e^2 / (3 m c^3)
  const double e = p.e(), c = p.c();
  CHECK(2 * e * e / (3 * p.m * c * c * c) == doctest::Approx(p.tau).epsilon(1e-12));
  // fine-structure relation e^2 = alpha hbar c
  CHECK(e * e == doctest::Approx(kFineStructure * p.hbar * c).epsilon(1e-12));

  p.charge = 0.1;
  p.light_speed = 1.0;  // implies tau = 2*0.01/3
  CHECK_FALSE(check(p, GridSpec{}).empty());
  p.tau = 2.0 * 0.01 / 3.0;
  CHECK(check(p, GridSpec{}).empty());
}

TEST_CASE("coupling must keep normal modes real") {
  SystemParams p;
  p.K = 1.0;
  CHECK_THROWS_AS(validate_params(p), Error);
  p.K = 0.1;
  CHECK_NOTHROW(validate_params(p));
}

TEST_CASE("derived seeds are pure and distinct") {
  CHECK(derive_seed(42, 3) == derive_seed(42, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(42, k));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

}
