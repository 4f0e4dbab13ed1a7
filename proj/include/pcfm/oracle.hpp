#pragma once

// Brute-force numerical evaluation of the island core integral, the kernel
// moments and the frequency kernel, used to validate the closed forms, pin
// regression values and serve as the fallback for degenerate dispersion.
//
// Anti-circularity rule: nothing here touches the Si/Ci-based special
// functions. Only complex z-moments and tensor Gauss-Legendre quadrature.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcfm/gauss_legendre.hpp"
#include "pcfm/numeric.hpp"
#include "pcfm/power_profile.hpp"
#include "pcfm/types.hpp"

namespace pcfm {

enum class ZMomentMethod { ClosedFormRecurrence, Adaptive };

struct QuadratureConfig {
  int freq_nodes_per_axis = 96;  // baseline tensor order per frequency axis
  ZMomentMethod z_moment_method = ZMomentMethod::ClosedFormRecurrence;
  double rel_tolerance_target = 1e-6;
  int max_subdivisions = 6;  // node-count doublings before giving up

  void validate() const {
    if (freq_nodes_per_axis < 8)
      throw std::invalid_argument("QuadratureConfig: freq_nodes_per_axis must be >= 8");
    if (!(rel_tolerance_target > 0.0))
      throw std::invalid_argument("QuadratureConfig: rel_tolerance_target must be > 0");
    if (max_subdivisions < 1)
      throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
  }
};

// Non-convergence carries the best estimate so callers can degrade gracefully.
class OracleConvergenceError : public std::runtime_error {
 public:
  OracleConvergenceError(const std::string& what, double best, double achieved)
      : std::runtime_error(what), best_estimate(best), achieved_rel(achieved) {}
  double best_estimate;
  double achieved_rel;
};

struct QuadratureResult {
  double value = 0.0;
  double achieved_rel = 0.0;
  int nodes_per_axis = 0;
};

namespace oracle {

/// All moments M_n(theta) = int_0^L z^n exp(j theta z) dz for n = 0..n_max in
/// one sweep. Taylor series for small |theta L| (terms shared across n),
/// integration-by-parts recurrence above; the split at 12 keeps both branches
/// at <= 1e-13 relative in long double for n <= 24.
inline void z_moments(int n_max, double L, double theta,
                      std::vector<std::complex<double>>& out) {
  if (n_max < 0) throw std::domain_error("z_moments: n_max must be >= 0");
  if (!(L > 0.0)) throw std::domain_error("z_moments: L must be > 0");
  using C = std::complex<long double>;
  out.resize(static_cast<std::size_t>(n_max) + 1);
  const long double x = static_cast<long double>(theta) * L;
  if (theta == 0.0) {
    long double lp = L;
    for (int n = 0; n <= n_max; ++n) {
      out[static_cast<std::size_t>(n)] = {static_cast<double>(lp / (n + 1)), 0.0};
      lp *= L;
    }
    return;
  }
  if (std::abs(static_cast<double>(x)) < 12.0) {
    // M_n = L^(n+1) sum_k (j x)^k / (k! (n+k+1)); the (j x)^k / k! terms are
    // shared by every n.
    static const auto inv = [] {
      std::array<long double, 128> t{};
      for (int i = 1; i < 128; ++i) t[static_cast<std::size_t>(i)] = 1.0L / i;
      return t;
    }();
    const C jx(0.0L, x);
    std::array<C, 26> sums{};
    if (n_max > 24) throw std::domain_error("z_moments: n_max must be <= 24");
    C term(1.0L, 0.0L);
    long double peak = 1.0L;
    for (int k = 0; k < 96; ++k) {
      if (k > 0) term *= jx * inv[static_cast<std::size_t>(k)];
      const long double mag = std::abs(term.real()) + std::abs(term.imag());
      peak = std::max(peak, mag);
      for (int n = 0; n <= n_max; ++n)
        sums[static_cast<std::size_t>(n)] += term * inv[static_cast<std::size_t>(n + k + 1)];
      if (mag < 1e-24L * peak && k > 2) break;
    }
    long double lp = L;
    for (int n = 0; n <= n_max; ++n) {
      const C m = sums[static_cast<std::size_t>(n)] * lp;
      out[static_cast<std::size_t>(n)] = {static_cast<double>(m.real()),
                                          static_cast<double>(m.imag())};
      lp *= L;
    }
    return;
  }
  const C jtheta(0.0L, static_cast<long double>(theta));
  const C phase(std::cos(x), std::sin(x));
  C m = (phase - 1.0L) / jtheta;  // M_0
  out[0] = {static_cast<double>(m.real()), static_cast<double>(m.imag())};
  long double lk = 1.0L;
  for (int k = 1; k <= n_max; ++k) {
    lk *= L;
    m = (lk * phase - static_cast<long double>(k) * m) / jtheta;
    out[static_cast<std::size_t>(k)] = {static_cast<double>(m.real()),
                                        static_cast<double>(m.imag())};
  }
}

/// Single moment M_n(theta); thin wrapper over the batched form.
inline std::complex<double> z_moment(int n, double L, double theta) {
  if (n < 0) throw std::domain_error("z_moment: n must be >= 0");
  std::vector<std::complex<double>> buf;
  z_moments(n, L, theta, buf);
  return buf[static_cast<std::size_t>(n)];
}

/// Same moment by composite quadrature; the independent cross-check for the
/// recurrence and the backing of ZMomentMethod::Adaptive.
inline std::complex<double> z_moment_quadrature(int n, double L, double theta) {
  const int panels = std::max(4, static_cast<int>(std::ceil(std::abs(theta) * L / kPi)) + 2);
  const double re = integrate_panels(
      [&](double z) { return std::pow(z, n) * std::cos(theta * z); }, 0.0, L, panels);
  const double im = integrate_panels(
      [&](double z) { return std::pow(z, n) * std::sin(theta * z); }, 0.0, L, panels);
  return {re, im};
}

namespace detail {

// Composite panel layout for one frequency axis: at least `minimum` nodes and
// at least 8 nodes per oscillation period of the worst-case phase.
struct AxisGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline AxisGrid axis_grid(double lo, double hi, double max_phase_rate, int minimum) {
  const double periods = std::abs(max_phase_rate) * (hi - lo) / (2.0 * kPi);
  int target = std::max(minimum, static_cast<int>(std::ceil(8.0 * periods)));
  constexpr int kOrder = 32;
  const int panels = (target + kOrder - 1) / kOrder;
  const GaussLegendreRule& rule = gauss_legendre(kOrder);
  AxisGrid grid;
  grid.nodes.reserve(static_cast<std::size_t>(panels) * kOrder);
  grid.weights.reserve(static_cast<std::size_t>(panels) * kOrder);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < kOrder; ++i) {
      grid.nodes.push_back(mid + 0.5 * h * rule.nodes[i]);
      grid.weights.push_back(0.5 * h * rule.weights[i]);
    }
  }
  return grid;
}

// Richardson-style refinement driver shared by the 2D quadratures: evaluate
// at doubling per-axis node counts until the relative change is within
// tolerance.
template <typename Eval>
QuadratureResult refine_2d(Eval&& evaluate, const FrequencyRectangle& rect,
                           double phase_rate_f1, double phase_rate_f2,
                           const QuadratureConfig& cfg, const char* label) {
  cfg.validate();
  double prev = 0.0;
  bool have_prev = false;
  double best = 0.0;
  double achieved = std::numeric_limits<double>::infinity();
  int minimum = cfg.freq_nodes_per_axis;
  for (int level = 0; level <= cfg.max_subdivisions; ++level) {
    const AxisGrid g1 = axis_grid(rect.a_k, rect.b_k, phase_rate_f1, minimum);
    const AxisGrid g2 = axis_grid(rect.c_m, rect.d_m, phase_rate_f2, minimum);
    const double value = evaluate(g1, g2);
    if (have_prev) {
      const double scale = std::max({std::abs(value), std::abs(prev), 1e-300});
      achieved = std::abs(value - prev) / scale;
      best = value;
      if (achieved <= cfg.rel_tolerance_target) {
        return {value, achieved, static_cast<int>(g1.nodes.size())};
      }
    } else {
      best = value;
    }
    prev = value;
    have_prev = true;
    minimum = static_cast<int>(std::max<std::size_t>(g1.nodes.size(), g2.nodes.size())) * 2;
  }
  throw OracleConvergenceError(std::string(label) + ": no convergence to " +
                                   std::to_string(cfg.rel_tolerance_target) + " after " +
                                   std::to_string(cfg.max_subdivisions) + " refinements",
                               best, achieved);
}

}  // namespace detail

/// Core island integral over the rectangle for a fitted polynomial profile:
/// the z integral collapses to a coefficient dot product with the complex
/// z-moments at theta = B f1 f2.
inline QuadratureResult core_integral(const PolynomialSpp& spp, const FrequencyRectangle& rect,
                                      double beta2_eff, const QuadratureConfig& cfg = {}) {
  const double big_b = 4.0 * kPi * kPi * beta2_eff;
  const double L = spp.span_length;
  const double f1_max = std::max(std::abs(rect.a_k), std::abs(rect.b_k));
  const double f2_max = std::max(std::abs(rect.c_m), std::abs(rect.d_m));
  auto evaluate = [&](const detail::AxisGrid& g1, const detail::AxisGrid& g2) {
    CompensatedSum<double> total;
    std::vector<std::complex<double>> moments;
    const int degree = static_cast<int>(spp.coefficients.size()) - 1;
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
      CompensatedSum<double> row;
      for (std::size_t j = 0; j < g2.nodes.size(); ++j) {
        const double theta = big_b * g1.nodes[i] * g2.nodes[j];
        if (cfg.z_moment_method == ZMomentMethod::ClosedFormRecurrence) {
          z_moments(degree, L, theta, moments);
        } else {
          moments.resize(spp.coefficients.size());
          for (std::size_t n = 0; n < moments.size(); ++n)
            moments[n] = z_moment_quadrature(static_cast<int>(n), L, theta);
        }
        std::complex<double> s;
        for (std::size_t n = 0; n < moments.size(); ++n)
          s += spp.coefficients[n] * moments[n];
        row.add(g2.weights[j] * std::norm(s));
      }
      total.add(g1.weights[i] * row.value());
    }
    return total.value();
  };
  return detail::refine_2d(evaluate, rect, std::abs(big_b) * f2_max * L,
                           std::abs(big_b) * f1_max * L, cfg, "core_integral(poly)");
}

/// Core island integral for a raw profile callable; the inner oscillatory z
/// integral is evaluated by composite quadrature sized to the phase.
inline QuadratureResult core_integral(const std::function<double(double)>& profile, double L,
                                      const FrequencyRectangle& rect, double beta2_eff,
                                      const QuadratureConfig& cfg = {}) {
  if (!(L > 0.0)) throw std::domain_error("core_integral: L must be > 0");
  const double big_b = 4.0 * kPi * kPi * beta2_eff;
  const double f1_max = std::max(std::abs(rect.a_k), std::abs(rect.b_k));
  const double f2_max = std::max(std::abs(rect.c_m), std::abs(rect.d_m));
  auto evaluate = [&](const detail::AxisGrid& g1, const detail::AxisGrid& g2) {
    CompensatedSum<double> total;
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
      CompensatedSum<double> row;
      for (std::size_t j = 0; j < g2.nodes.size(); ++j) {
        const double theta = big_b * g1.nodes[i] * g2.nodes[j];
        const int panels =
            std::max(4, static_cast<int>(std::ceil(std::abs(theta) * L / kPi)) + 2);
        const double re = integrate_panels(
            [&](double z) { return profile(z) * std::cos(theta * z); }, 0.0, L, panels);
        const double im = integrate_panels(
            [&](double z) { return profile(z) * std::sin(theta * z); }, 0.0, L, panels);
        row.add(g2.weights[j] * (re * re + im * im));
      }
      total.add(g1.weights[i] * row.value());
    }
    return total.value();
  };
  return detail::refine_2d(evaluate, rect, std::abs(big_b) * f2_max * L,
                           std::abs(big_b) * f1_max * L, cfg, "core_integral(callable)");
}

/// Kernel moment I_nm = intint [M_n M_m^* + M_m M_n^*] df1 df2 by tensor
/// quadrature. The two conjugate halves are accumulated separately; their sum
/// must come out real, anything else flags a moment-code bug.
inline QuadratureResult kernel_moment(int n, int m, const FrequencyRectangle& rect,
                                      double beta2_eff, double L,
                                      const QuadratureConfig& cfg = {}) {
  if (n < 0 || m < 0) throw std::domain_error("kernel_moment: n, m must be >= 0");
  const double big_b = 4.0 * kPi * kPi * beta2_eff;
  const double f1_max = std::max(std::abs(rect.a_k), std::abs(rect.b_k));
  const double f2_max = std::max(std::abs(rect.c_m), std::abs(rect.d_m));
  auto evaluate = [&](const detail::AxisGrid& g1, const detail::AxisGrid& g2) {
    CompensatedSum<double> real_part;
    CompensatedSum<double> imag_part;
    std::vector<std::complex<double>> moments;
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
      CompensatedSum<double> row_re, row_im;
      for (std::size_t j = 0; j < g2.nodes.size(); ++j) {
        const double theta = big_b * g1.nodes[i] * g2.nodes[j];
        z_moments(std::max(n, m), L, theta, moments);
        const std::complex<double> mn = moments[static_cast<std::size_t>(n)];
        const std::complex<double> mm = moments[static_cast<std::size_t>(m)];
        const std::complex<double> q = mn * std::conj(mm) + mm * std::conj(mn);
        row_re.add(g2.weights[j] * q.real());
        row_im.add(g2.weights[j] * q.imag());
      }
      real_part.add(g1.weights[i] * row_re.value());
      imag_part.add(g1.weights[i] * row_im.value());
    }
    const double re = real_part.value();
    if (std::abs(imag_part.value()) > 1e-10 * std::max(std::abs(re), 1e-300))
      throw std::logic_error("kernel_moment: imaginary residual exceeds bound");
    return re;
  };
  return detail::refine_2d(evaluate, rect, std::abs(big_b) * f2_max * L,
                           std::abs(big_b) * f1_max * L, cfg, "kernel_moment");
}

struct FrequencyKernelResult {
  double real = 0.0;
  double imag = 0.0;  // diagnostic; nonzero for asymmetric rectangles
  double achieved_rel = 0.0;
};

/// F(u) = intint exp(j B f1 f2 u) df1 df2 over the rectangle. Only the real
/// (even in u) part is matched by the closed-form kernel.
inline FrequencyKernelResult frequency_kernel(double u, const FrequencyRectangle& rect,
                                              double beta2_eff,
                                              const QuadratureConfig& cfg = {}) {
  pcfm::detail::require_finite(u, "oracle::frequency_kernel");
  const double big_b = 4.0 * kPi * kPi * beta2_eff;
  if (big_b * u == 0.0) return {rect.area(), 0.0, 0.0};  // integrand identically 1
  const double f1_max = std::max(std::abs(rect.a_k), std::abs(rect.b_k));
  const double f2_max = std::max(std::abs(rect.c_m), std::abs(rect.d_m));
  double imag = 0.0;
  auto evaluate = [&](const detail::AxisGrid& g1, const detail::AxisGrid& g2) {
    CompensatedSum<double> re, im;
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
      CompensatedSum<double> row_re, row_im;
      for (std::size_t j = 0; j < g2.nodes.size(); ++j) {
        const double phase = big_b * g1.nodes[i] * g2.nodes[j] * u;
        row_re.add(g2.weights[j] * std::cos(phase));
        row_im.add(g2.weights[j] * std::sin(phase));
      }
      re.add(g1.weights[i] * row_re.value());
      im.add(g1.weights[i] * row_im.value());
    }
    imag = im.value();
    return re.value();
  };
  const QuadratureResult r =
      detail::refine_2d(evaluate, rect, std::abs(big_b) * f2_max * std::abs(u),
                        std::abs(big_b) * f1_max * std::abs(u), cfg, "frequency_kernel");
  return {r.value, imag, r.achieved_rel};
}

}  // namespace oracle
}  // namespace pcfm
