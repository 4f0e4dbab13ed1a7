#include "pcfm/oracle.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "support/quadrature.hpp"

using namespace pcfm;

namespace {

// frozen 40-digit quadrature pin for M_3(L=1, theta=10)
constexpr double kM3Re = -0.075206687378448464556;
constexpr double kM3Im = 0.062878503073039057998;

FrequencyRectangle sci_rect(double bandwidth) {
  return {-0.5 * bandwidth, 0.5 * bandwidth, -0.5 * bandwidth, 0.5 * bandwidth};
}

}  // namespace

TEST_CASE("z_moment elementary cases") {
  const double L = 3.0;
  SECTION("n=0 analytic") {
    for (double theta : {0.5, 13.0, -7.0}) {
      const std::complex<double> expected =
          (std::exp(std::complex<double>(0.0, theta * L)) - 1.0) /
          std::complex<double>(0.0, theta);
      const auto got = oracle::z_moment(0, L, theta);
      CHECK_THAT(got.real(), Catch::Matchers::WithinRel(expected.real(), 1e-13));
      CHECK_THAT(got.imag(), Catch::Matchers::WithinRel(expected.imag(), 1e-13));
    }
  }
  SECTION("theta=0 is the plain power moment") {
    for (int n : {0, 1, 5, 12}) {
      const auto got = oracle::z_moment(n, L, 0.0);
      CHECK_THAT(got.real(), Catch::Matchers::WithinRel(std::pow(L, n + 1) / (n + 1), 1e-15));
      CHECK(got.imag() == 0.0);
    }
  }
  SECTION("frozen pin n=3, L=1, theta=10") {
    const auto got = oracle::z_moment(3, 1.0, 10.0);
    CHECK_THAT(got.real(), Catch::Matchers::WithinRel(kM3Re, 1e-11));
    CHECK_THAT(got.imag(), Catch::Matchers::WithinRel(kM3Im, 1e-11));
  }
}

TEST_CASE("z_moment recurrence agrees with quadrature across the theta range") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logx(-4.0, 4.0);
  std::uniform_int_distribution<int> nd(0, 12);
  std::uniform_real_distribution<double> Ld(0.5, 1e5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = nd(rng);
    const double L = Ld(rng);
    const double x = std::pow(10.0, logx(rng)) * ((trial % 2) ? -1.0 : 1.0);
    const double theta = x / L;
    const auto a = oracle::z_moment(n, L, theta);
    const auto b = oracle::z_moment_quadrature(n, L, theta);
    CAPTURE(n, L, x);
    const double scale = std::abs(b) + std::pow(L, n + 1) * 1e-14;
    CHECK(std::abs(a - b) <= 1e-10 * scale);
  }
}

TEST_CASE("z_moment agrees with the independent test integrator") {
  for (auto [n, L, theta] : {std::tuple{3, 1.0, 10.0}, {7, 2.0, 55.0}, {12, 10.0, 0.03}}) {
    const auto ref = testsupport::integrate_complex(
        [&](double z) {
          return std::pow(z, n) * std::exp(std::complex<double>(0.0, theta * z));
        },
        0.0, L, 1e-13);
    const auto got = oracle::z_moment(n, L, theta);
    CHECK_THAT(got.real(), Catch::Matchers::WithinAbs(ref.real(), 1e-11 * std::abs(ref)));
    CHECK_THAT(got.imag(), Catch::Matchers::WithinAbs(ref.imag(), 1e-11 * std::abs(ref)));
  }
}

TEST_CASE("core_integral: flat profile with vanishing dispersion tends to L^2 area") {
  const double L = 1e3;
  PolynomialSpp flat{{1.0}, 0, L, 0.0, 0.0, false};
  const FrequencyRectangle rect{-1e6, 1e6, -1e6, 1e6};
  QuadratureConfig cfg;
  const auto r = oracle::core_integral(flat, rect, 1e-40, cfg);
  CHECK_THAT(r.value, Catch::Matchers::WithinRel(L * L * rect.area(), 1e-9));
  // exactly zero dispersion as well
  const auto r0 = oracle::core_integral(flat, rect, 0.0, cfg);
  CHECK_THAT(r0.value, Catch::Matchers::WithinRel(L * L * rect.area(), 1e-12));
}

TEST_CASE("core_integral polynomial path equals callable path") {
  const double L = 8e4;
  const double alpha = attenuation_db_per_km_to_per_m(0.2);
  auto profile = PowerProfile::exponential(alpha, L);
  auto spp = fit_polynomial(profile, 6);
  const FrequencyRectangle rect = sci_rect(32e9);  // quarter-size SCI for speed
  const double beta2 = -21.7e-27;
  QuadratureConfig cfg;
  cfg.rel_tolerance_target = 1e-8;
  const auto via_moments = oracle::core_integral(spp, rect, beta2, cfg);
  const auto via_callable = oracle::core_integral(
      [&](double z) { return evaluate_polynomial(spp, z); }, L, rect, beta2, cfg);
  CHECK_THAT(via_moments.value, Catch::Matchers::WithinRel(via_callable.value, 1e-9));
}

TEST_CASE("core_integral self-consistency under node doubling") {
  const double L = 8e4;
  auto spp = fit_polynomial(PowerProfile::exponential(attenuation_db_per_km_to_per_m(0.2), L), 8);
  const FrequencyRectangle rect = sci_rect(64e9);
  QuadratureConfig cfg;
  cfg.rel_tolerance_target = 1e-6;
  const auto r = oracle::core_integral(spp, rect, -21.7e-27, cfg);
  QuadratureConfig denser = cfg;
  denser.freq_nodes_per_axis = r.nodes_per_axis * 2;
  const auto r2 = oracle::core_integral(spp, rect, -21.7e-27, denser);
  CHECK_THAT(r2.value, Catch::Matchers::WithinRel(r.value, 2.0 * cfg.rel_tolerance_target));
}

TEST_CASE("core_integral adaptive z-moment method matches the recurrence method") {
  const double L = 5e4;
  auto spp = fit_polynomial(PowerProfile::exponential(attenuation_db_per_km_to_per_m(0.25), L), 4);
  const FrequencyRectangle rect = sci_rect(20e9);
  QuadratureConfig recurrence;
  recurrence.rel_tolerance_target = 1e-7;
  QuadratureConfig adaptive = recurrence;
  adaptive.z_moment_method = ZMomentMethod::Adaptive;
  const auto a = oracle::core_integral(spp, rect, -21.7e-27, recurrence);
  const auto b = oracle::core_integral(spp, rect, -21.7e-27, adaptive);
  CHECK_THAT(a.value, Catch::Matchers::WithinRel(b.value, 1e-7));
}

TEST_CASE("kernel_moment is real, symmetric and matches the direct definition") {
  const FrequencyRectangle rect{-32e9, 32e9, 43e9, 107e9};
  const double beta2 = -21.7e-27;
  const double L = 8e4;
  QuadratureConfig cfg;
  cfg.rel_tolerance_target = 1e-8;
  const auto a = oracle::kernel_moment(1, 2, rect, beta2, L, cfg);
  const auto b = oracle::kernel_moment(2, 1, rect, beta2, L, cfg);
  CHECK(a.value == b.value);  // symmetric construction
  CHECK(std::isfinite(a.value));
}

TEST_CASE("frequency_kernel quadrature basics") {
  const FrequencyRectangle rect{-32e9, 32e9, -32e9, 32e9};
  const double beta2 = -21.7e-27;
  SECTION("u = 0 gives the rectangle area exactly") {
    const auto r = oracle::frequency_kernel(0.0, rect, beta2);
    CHECK(r.real == rect.area());
    CHECK(r.imag == 0.0);
  }
  SECTION("zero-measure rectangle gives zero") {
    const FrequencyRectangle degenerate{5e9, 5e9, -32e9, 32e9};
    const auto r = oracle::frequency_kernel(1e4, degenerate, beta2);
    CHECK(r.real == 0.0);
  }
  SECTION("symmetric rectangle kernel is even in u") {
    const auto plus = oracle::frequency_kernel(3e4, rect, beta2);
    const auto minus = oracle::frequency_kernel(-3e4, rect, beta2);
    CHECK_THAT(plus.real, Catch::Matchers::WithinRel(minus.real, 1e-12));
  }
}

TEST_CASE("oracle reports non-convergence with its best estimate") {
  const double L = 8e4;
  auto spp = fit_polynomial(PowerProfile::exponential(attenuation_db_per_km_to_per_m(0.2), L), 8);
  const FrequencyRectangle rect = sci_rect(64e9);
  QuadratureConfig hopeless;
  hopeless.rel_tolerance_target = 1e-18;  // below double epsilon, unreachable
  hopeless.max_subdivisions = 1;
  try {
    oracle::core_integral(spp, rect, -21.7e-27, hopeless);
    FAIL("expected OracleConvergenceError");
  } catch (const OracleConvergenceError& e) {
    CHECK(e.best_estimate > 0.0);
    CHECK(e.achieved_rel > 1e-18);
  }
}

TEST_CASE("quadrature config validation") {
  QuadratureConfig bad;
  bad.freq_nodes_per_axis = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = QuadratureConfig{};
  bad.rel_tolerance_target = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(QuadratureConfig{}.validate());
}
