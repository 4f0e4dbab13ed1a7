#pragma once

// Scalar special functions for the closed-form NLI model: the sine and cosine
// integrals Si/Ci, sine moments S_k(L;lambda) = int_0^L u^k sin(lambda u) du,
// the primitive J(X) = int_0^X Si(t)/t dt, integer-argument Beta values, and
// the combined moment int_0^L u^(p-1) (L-u)^q Si(lambda u) du.
//
// All functions are pure and thread-safe. Finite alternating closed forms are
// swapped for termwise power series below a configurable argument threshold;
// internal accumulation is long double to absorb the binomial cancellation of
// the closed forms near the switch point.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pcfm/gauss_legendre.hpp"
#include "pcfm/numeric.hpp"

namespace pcfm {

// Evaluation-strategy knobs shared by the series/closed-form dual branches.
struct SpecialFnConfig {
  // |lambda*L| (or |X| for the Si/t primitive) below which the power-series
  // branch is used instead of the finite closed form. The closed forms lose
  // roughly k!/(lambda*L)^(k+2) digits to cancellation for small arguments,
  // while the series loses exp(|x|) near x ~ 20; 16 balances the two with
  // long-double accumulation.
  double series_switch_threshold = 16.0;
  int series_term_cap = 96;
  double abs_tolerance = 1e-12;

  void validate() const {
    if (!(series_switch_threshold > 0.0))
      throw std::invalid_argument("SpecialFnConfig: series_switch_threshold must be > 0");
    if (series_term_cap < 10)
      throw std::invalid_argument("SpecialFnConfig: series_term_cap must be >= 10");
    if (!(abs_tolerance > 0.0))
      throw std::invalid_argument("SpecialFnConfig: abs_tolerance must be > 0");
  }
};

inline const SpecialFnConfig& default_special_fn_config() {
  static const SpecialFnConfig cfg{};
  return cfg;
}

namespace detail {

// Rational (Pade-type) approximations of the trig-integral auxiliary
// functions, good to ~1e-16 for x >= 4:
//   Si(x) = pi/2 - f(x) cos x - g(x) sin x
//   Ci(x) = f(x) sin x - g(x) cos x
// Coefficients are the widely used Chebyshev-Pade fits of f and g in 1/x^2.
inline double si_aux_f(double x) {
  static constexpr std::array<double, 11> num = {
      1.0,
      7.44437068161936700618e2,
      1.96396372895146869801e5,
      2.37750310125431834034e7,
      1.43073403821274636888e9,
      4.33736238870432522765e10,
      6.40533830574022022911e11,
      4.20968180571076940208e12,
      1.00795182980368574617e13,
      4.94816688199951963482e12,
      -4.94701168645415959931e11,
  };
  static constexpr std::array<double, 10> den = {
      1.0,
      7.46437068161927678031e2,
      1.97865247031583951450e5,
      2.41535670165126845144e7,
      1.47478952192985464958e9,
      4.58595115847765779830e10,
      7.08501308149515401563e11,
      5.06084464593475076774e12,
      1.43468549171581016479e13,
      1.11535493509914254097e13,
  };
  const double y = 1.0 / (x * x);
  double p = num.back();
  for (int i = static_cast<int>(num.size()) - 2; i >= 0; --i) p = p * y + num[i];
  double q = den.back();
  for (int i = static_cast<int>(den.size()) - 2; i >= 0; --i) q = q * y + den[i];
  return p / (q * x);
}

inline double si_aux_g(double x) {
  static constexpr std::array<double, 11> num = {
      1.0,
      8.1359520115168615e2,
      2.35239181626478200e5,
      3.12557570795778731e7,
      2.06297595146763354e9,
      6.83052205423625007e10,
      1.09049528450362786e12,
      7.57664583257834349e12,
      1.81004487464664575e13,
      6.43291613143049485e12,
      -1.36517137670871689e12,
  };
  static constexpr std::array<double, 10> den = {
      1.0,
      8.19595201151451564e2,
      2.40036752835578777e5,
      3.26026661647090822e7,
      2.23355543278099360e9,
      7.87465017341829930e10,
      1.39866710696414565e12,
      1.17164723371736605e13,
      4.01839087307656620e13,
      3.99653257887490811e13,
  };
  const double y = 1.0 / (x * x);
  double p = num.back();
  for (int i = static_cast<int>(num.size()) - 2; i >= 0; --i) p = p * y + num[i];
  double q = den.back();
  for (int i = static_cast<int>(den.size()) - 2; i >= 0; --i) q = q * y + den[i];
  return p * y / q;
}

// Pade fit of Si(x) itself for |x| <= 4, ~1e-16 accurate.
inline double si_small(double x) {
  static constexpr std::array<double, 8> num = {
      1.0,
      -4.54393409816329991e-2,
      1.15457225751016682e-3,
      -1.41018536821330254e-5,
      9.43280809438713025e-8,
      -3.53201978997168357e-10,
      7.08240282274875911e-13,
      -6.05338212010422477e-16,
  };
  static constexpr std::array<double, 7> den = {
      1.0,
      1.01162145739225565e-2,
      4.99175116169755106e-5,
      1.55654986308745614e-7,
      3.28067571055789734e-10,
      4.5049097575386581e-13,
      3.21107051193712168e-16,
  };
  const double x2 = x * x;
  double p = num.back();
  for (int i = static_cast<int>(num.size()) - 2; i >= 0; --i) p = p * x2 + num[i];
  double q = den.back();
  for (int i = static_cast<int>(den.size()) - 2; i >= 0; --i) q = q * x2 + den[i];
  return x * p / q;
}

}  // namespace detail

/// Sine integral Si(x) = int_0^x sin(t)/t dt. Odd; absolute accuracy ~1e-15
/// for moderate |x|, limited only by argument reduction of sin/cos beyond.
inline double sine_integral(double x) {
  detail::require_finite(x, "sine_integral");
  const double ax = std::abs(x);
  double v;
  if (ax <= 4.0) {
    v = detail::si_small(ax);
  } else {
    v = 0.5 * kPi - detail::si_aux_f(ax) * std::cos(ax) - detail::si_aux_g(ax) * std::sin(ax);
  }
  return x < 0.0 ? -v : v;
}

/// Cosine integral Ci(x) = -int_x^inf cos(t)/t dt, x > 0 only (the real Ci is
/// singular at 0 and complex for x < 0).
inline double cosine_integral(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("cosine_integral: requires finite x > 0");
  if (x <= 4.0) {
    // gamma + ln x + sum_{k>=1} (-x^2)^k / (2k (2k)!)
    long double sum = 0.0L;
    long double term = 1.0L;
    const long double x2 = static_cast<long double>(x) * x;
    for (int k = 1; k <= 32; ++k) {
      term *= -x2 / ((2.0L * k - 1.0L) * (2.0L * k));
      const long double contrib = term / (2.0L * k);
      sum += contrib;
      if (std::abs(static_cast<double>(contrib)) < 1e-19 * (1.0 + std::abs(static_cast<double>(sum))))
        break;
    }
    return kEulerGamma + std::log(x) + static_cast<double>(sum);
  }
  return detail::si_aux_f(x) * std::sin(x) - detail::si_aux_g(x) * std::cos(x);
}

/// Sine moment S_k(L;lambda) = int_0^L u^k sin(lambda u) du.
/// Finite closed form for |lambda L| above the switch threshold, termwise
/// Taylor integration below. Exact zero for lambda == 0.
inline double sine_moment(int k, double L, double lambda,
                          const SpecialFnConfig& cfg = default_special_fn_config()) {
  if (k < 0) throw std::domain_error("sine_moment: k must be >= 0");
  if (!(L > 0.0)) throw std::domain_error("sine_moment: L must be > 0");
  detail::require_finite(lambda, "sine_moment");
  if (lambda == 0.0) return 0.0;

  const double x = lambda * L;
  if (std::abs(x) < cfg.series_switch_threshold) {
    // int u^k sum_j (-1)^j (lambda u)^(2j+1)/(2j+1)! du
    //   = sum_j (-1)^j lambda^(2j+1) L^(k+2j+2) / ((2j+1)! (k+2j+2))
    const long double xl = static_cast<long double>(lambda) * L;
    const long double x2 = xl * xl;
    long double factor = xl * std::pow(static_cast<long double>(L), k + 1);
    CompensatedSum<long double> sum;
    sum.add(factor / (k + 2));
    for (int j = 1; j < cfg.series_term_cap; ++j) {
      factor *= -x2 / ((2.0L * j) * (2.0L * j + 1.0L));
      const long double contrib = factor / (k + 2 * j + 2);
      sum.add(contrib);
      if (std::abs(static_cast<double>(contrib)) <
          1e-21 * std::abs(static_cast<double>(sum.value())) + 1e-300)
        break;
    }
    return static_cast<double>(sum.value());
  }

  // S_k = sum_{p=0}^{k} (-1)^p k!/(k-p)! L^(k-p)/lambda^(p+1)
  //         * sin(lambda L - pi (p+1)/2)
  //     + k!/lambda^(k+1) * sin(pi (k+1)/2),
  // with the quarter-turn phases resolved exactly to +-sin/+-cos.
  const long double s = std::sin(static_cast<long double>(x));
  const long double c = std::cos(static_cast<long double>(x));
  long double coef = std::pow(static_cast<long double>(L), k) / lambda;
  CompensatedSum<long double> sum;
  for (int p = 0; p <= k; ++p) {
    long double phase;  // sin(x - pi (p+1)/2)
    switch ((p + 1) & 3) {
      case 0: phase = s; break;
      case 1: phase = -c; break;
      case 2: phase = -s; break;
      default: phase = c; break;
    }
    sum.add(((p & 1) ? -coef : coef) * phase);
    coef *= static_cast<long double>(k - p) / (static_cast<long double>(lambda) * L);
  }
  // trailing term: p ran one past k in `coef` scaling, so rebuild exactly
  long double tail = 1.0L;
  for (int i = 1; i <= k; ++i) tail *= i / static_cast<long double>(lambda);
  tail /= lambda;
  switch ((k + 1) & 3) {
    case 1: sum.add(tail); break;
    case 3: sum.add(-tail); break;
    default: break;  // sin(pi (k+1)/2) = 0 for even residues
  }
  return static_cast<double>(sum.value());
}

/// Integer Beta value B(p, q+1) = (p-1)! q! / (p+q)!, p >= 1, q >= 0.
/// Exact rational 1/(p * C(p+q, p)) while the binomial fits an integer
/// mantissa; log-Gamma fallback beyond (<= 1e-14 relative).
inline double beta_integer(int p, int q) {
  if (p < 1 || q < 0) throw std::domain_error("beta_integer: requires p >= 1, q >= 0");
  if (p + q <= 64) {
    return static_cast<double>(1.0L / (p * detail::binomial_exact(p + q, p)));
  }
  return std::exp(std::lgamma(static_cast<double>(p)) + std::lgamma(q + 1.0) -
                  std::lgamma(p + q + 1.0));
}

namespace detail {

// Asymptotic tail H(X) = J(X) - (pi/2) ln X - pi*gamma/2
//               = cos(X) A(1/X) + sin(X) B(1/X),
// coefficients from the formal solution of A' + B = -f/X, B' - A = -g/X with
// the Si auxiliary asymptotic series. Truncation error < 3e-15 for X >= 40.
inline double j_tail_asymptotic(double x) {
  static constexpr std::array<double, 8> a_coef = {
      // X^-3, X^-5, ..., X^-17
      3.0, -50.0, 1764.0, -109584.0, 10628640.0, -1486442880.0,
      283465647360.0, -70734282393600.0,
  };
  static constexpr std::array<double, 9> b_coef = {
      // X^-2, X^-4, ..., X^-18
      -1.0, 11.0, -274.0, 13068.0, -1026576.0, 120543840.0,
      -19802759040.0, 4339163001600.0, -1223405590579200.0,
  };
  const double y = 1.0 / (x * x);
  double a = a_coef.back();
  for (int i = static_cast<int>(a_coef.size()) - 2; i >= 0; --i) a = a * y + a_coef[i];
  a /= x * x * x;
  double b = b_coef.back();
  for (int i = static_cast<int>(b_coef.size()) - 2; i >= 0; --i) b = b * y + b_coef[i];
  b *= y;
  return std::cos(x) * a + std::sin(x) * b;
}

// H(X) for X >= 4: bridge the gap to the asymptotic region by integrating
// (pi/2 - Si(t))/t = (f(t) cos t + g(t) sin t)/t with composite quadrature.
inline double j_tail(double x) {
  constexpr double kAsymptoticFrom = 40.0;
  if (x >= kAsymptoticFrom) return j_tail_asymptotic(x);
  const auto integrand = [](double t) {
    return (si_aux_f(t) * std::cos(t) + si_aux_g(t) * std::sin(t)) / t;
  };
  const int panels = static_cast<int>(std::ceil((kAsymptoticFrom - x) / 2.0)) + 1;
  return integrate_panels(integrand, x, kAsymptoticFrom, panels) +
         j_tail_asymptotic(kAsymptoticFrom);
}

}  // namespace detail

/// J(X) = int_0^X Si(t)/t dt, the odd primitive of Si(t)/t. Power series
/// (equivalent to X * 2F3(1/2,1/2; 3/2,3/2,3/2; -X^2/4)) below the switch
/// threshold; (pi/2) ln X + pi*gamma/2 + oscillatory tail above.
inline double si_over_t_primitive(double X,
                                  const SpecialFnConfig& cfg = default_special_fn_config()) {
  detail::require_finite(X, "si_over_t_primitive");
  if (X == 0.0) return 0.0;
  const double ax = std::abs(X);
  double v;
  if (ax <= cfg.series_switch_threshold) {
    // J(X) = sum_j (-1)^j X^(2j+1) / ((2j+1)^2 (2j+1)!), term ratio
    // -X^2 (2j-1)^2 / ((2j)(2j+1)^3)
    const long double x2 = static_cast<long double>(ax) * ax;
    long double term = ax;
    CompensatedSum<long double> sum;
    sum.add(term);
    for (int j = 1; j < cfg.series_term_cap; ++j) {
      const long double odd = 2.0L * j + 1.0L;
      term *= -x2 * (2.0L * j - 1.0L) * (2.0L * j - 1.0L) / ((2.0L * j) * odd * odd * odd);
      sum.add(term);
      if (std::abs(static_cast<double>(term)) <
          1e-21 * std::abs(static_cast<double>(sum.value())) + 1e-300)
        break;
    }
    v = static_cast<double>(sum.value());
  } else {
    v = 0.5 * kPi * std::log(ax) + 0.5 * kPi * kEulerGamma + detail::j_tail(ax);
  }
  return X < 0.0 ? -v : v;
}

/// Combined moment int_0^L u^(p-1) (L-u)^q Si(lambda u) du, p >= 0, q >= 0.
/// Beta-function closed form for p >= 1, J-based form for p = 0; termwise
/// Taylor integration below the switch threshold. Exact zero for lambda == 0.
inline double sine_integral_moment(int p, int q, double L, double lambda,
                                   const SpecialFnConfig& cfg = default_special_fn_config()) {
  if (p < 0 || q < 0) throw std::domain_error("sine_integral_moment: requires p, q >= 0");
  if (!(L > 0.0)) throw std::domain_error("sine_integral_moment: L must be > 0");
  detail::require_finite(lambda, "sine_integral_moment");
  if (lambda == 0.0) return 0.0;

  const double x = lambda * L;
  const long double Lp = std::pow(static_cast<long double>(L), p + q);

  if (std::abs(x) < cfg.series_switch_threshold) {
    // Si(lambda u) expanded termwise:
    //   sum_j (-1)^j x^(2j+1) / ((2j+1)(2j+1)!) * L^(p+q) * B(p+2j+1, q+1)
    const long double x2 = static_cast<long double>(x) * x;
    long double term = static_cast<long double>(x) * Lp * beta_integer(p + 1, q);
    CompensatedSum<long double> sum;
    sum.add(term);
    for (int j = 1; j < cfg.series_term_cap; ++j) {
      const long double a = p + 2.0L * j - 1.0L;  // B(p+2j+1,q+1)/B(p+2j-1,q+1)
      const long double beta_ratio = a * (a + 1.0L) / ((a + q + 1.0L) * (a + q + 2.0L));
      term *= -x2 * (2.0L * j - 1.0L) /
              ((2.0L * j) * (2.0L * j + 1.0L) * (2.0L * j + 1.0L)) * beta_ratio;
      sum.add(term);
      if (std::abs(static_cast<double>(term)) <
          1e-21 * std::abs(static_cast<double>(sum.value())) + 1e-300)
        break;
    }
    return static_cast<double>(sum.value());
  }

  const long double si_x = sine_integral(x);
  CompensatedSum<long double> sum;
  if (p >= 1) {
    // Si(x) L^(p+q) B(p, q+1)
    //   - sum_r C(q,r) (-1)^r L^(q-r) S_(p+r-1)(L;lambda) / (p+r)
    sum.add(si_x * Lp * static_cast<long double>(beta_integer(p, q)));
    long double Lpow = std::pow(static_cast<long double>(L), q);
    for (int r = 0; r <= q; ++r) {
      const long double w = detail::binomial_exact(q, r) * Lpow / (p + r);
      const long double sm = sine_moment(p + r - 1, L, lambda, cfg);
      sum.add(((r & 1) ? w : -w) * sm);
      Lpow /= L;
    }
  } else {
    // sum_r C(q,r) (-1)^r L^(q-r) Jr, with J0 = J(x) and
    // Jr = (L^r Si(x) - S_(r-1)(L;lambda)) / r for r >= 1
    long double Lpow = std::pow(static_cast<long double>(L), q);
    for (int r = 0; r <= q; ++r) {
      long double jr;
      if (r == 0) {
        jr = si_over_t_primitive(x, cfg);
      } else {
        jr = (std::pow(static_cast<long double>(L), r) * si_x -
              static_cast<long double>(sine_moment(r - 1, L, lambda, cfg))) /
             r;
      }
      const long double w = detail::binomial_exact(q, r) * Lpow;
      sum.add(((r & 1) ? -w : w) * jr);
      Lpow /= L;
    }
  }
  return static_cast<double>(sum.value());
}

}  // namespace pcfm
