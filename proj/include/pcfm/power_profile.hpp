#pragma once

// Per-channel spatial power profiles over a span, the composed island profile
// sqrt(p_m p_k p_n / p_cut), and its least-squares polynomial representation.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pcfm/numeric.hpp"

namespace pcfm {

inline constexpr int kMaxPolynomialOrder = 12;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double attenuation_db_per_km_to_per_m(double db_per_km) {
  return db_per_km * std::log(10.0) / 10.0 / 1000.0;
}

enum class ProfileKind { Exponential, ExponentialLumpedLoss, LinearDbTilt, Tabulated };

// Normalized power vs distance along one span; p(0) = 1 for the generated
// kinds, tabulated data is used as given. Strictly positive on [0, L].
class PowerProfile {
 public:
  static PowerProfile exponential(double attenuation_per_m, double span_length_m) {
    PowerProfile p(ProfileKind::Exponential, span_length_m);
    p.attenuation_per_m_ = attenuation_per_m;
    return p;
  }

  static PowerProfile exponential_with_lumped_loss(double attenuation_per_m,
                                                   double loss_position_m, double loss_db,
                                                   double span_length_m) {
    if (loss_position_m < 0.0 || loss_position_m > span_length_m)
      throw std::invalid_argument("profile: lumped loss position outside the span");
    PowerProfile p(ProfileKind::ExponentialLumpedLoss, span_length_m);
    p.attenuation_per_m_ = attenuation_per_m;
    p.loss_position_m_ = loss_position_m;
    p.loss_factor_ = db_to_linear(-loss_db);
    if (!(p.loss_factor_ > 0.0)) throw std::invalid_argument("profile: lumped loss absorbs everything");
    return p;
  }

  static PowerProfile linear_db_tilt(double tilt_db, double span_length_m) {
    PowerProfile p(ProfileKind::LinearDbTilt, span_length_m);
    p.tilt_db_ = tilt_db;
    return p;
  }

  static PowerProfile tabulated(std::vector<double> z, std::vector<double> power,
                                double span_length_m) {
    if (z.size() != power.size() || z.size() < 2)
      throw std::invalid_argument("profile: tabulated data needs >= 2 matching samples");
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!(power[i] > 0.0))
        throw std::invalid_argument("profile: tabulated power must be > 0 (sample " +
                                    std::to_string(i) + ")");
      if (i > 0 && !(z[i] > z[i - 1]))
        throw std::invalid_argument("profile: tabulated z must be strictly increasing");
    }
    const double tol = 1e-6 * span_length_m;
    if (z.front() > tol || z.back() < span_length_m - tol)
      throw std::invalid_argument("profile: tabulated samples must cover [0, span length]");
    PowerProfile p(ProfileKind::Tabulated, span_length_m);
    p.z_ = std::move(z);
    p.p_ = std::move(power);
    p.build_monotone_cubic();
    return p;
  }

  ProfileKind kind() const { return kind_; }
  double span_length() const { return span_length_m_; }

  double operator()(double z) const {
    if (!(z >= 0.0) || !(z <= span_length_m_))
      throw std::domain_error("profile: z outside [0, span length]");
    switch (kind_) {
      case ProfileKind::Exponential:
        return std::exp(-attenuation_per_m_ * z);
      case ProfileKind::ExponentialLumpedLoss: {
        const double base = std::exp(-attenuation_per_m_ * z);
        return z >= loss_position_m_ ? base * loss_factor_ : base;
      }
      case ProfileKind::LinearDbTilt:
        return db_to_linear(tilt_db_ * (z / span_length_m_));
      case ProfileKind::Tabulated:
        return interpolate(z);
    }
    return 1.0;  // unreachable
  }

  friend bool operator==(const PowerProfile& a, const PowerProfile& b) {
    return a.kind_ == b.kind_ && a.span_length_m_ == b.span_length_m_ &&
           a.attenuation_per_m_ == b.attenuation_per_m_ &&
           a.loss_position_m_ == b.loss_position_m_ && a.loss_factor_ == b.loss_factor_ &&
           a.tilt_db_ == b.tilt_db_ && a.z_ == b.z_ && a.p_ == b.p_;
  }

 private:
  PowerProfile(ProfileKind kind, double span_length_m)
      : kind_(kind), span_length_m_(span_length_m) {
    if (!(span_length_m > 0.0)) throw std::invalid_argument("profile: span length must be > 0");
  }

  // Fritsch-Carlson monotone cubic slopes: interpolation never overshoots the
  // data, keeping the profile positive between positive samples.
  void build_monotone_cubic() {
    const std::size_t n = z_.size();
    slopes_.assign(n, 0.0);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (p_[i + 1] - p_[i]) / (z_[i + 1] - z_[i]);
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      slopes_[i] = (d[i - 1] * d[i] > 0.0) ? 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]) : 0.0;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (d[i] == 0.0) {
        slopes_[i] = slopes_[i + 1] = 0.0;
        continue;
      }
      const double a = slopes_[i] / d[i];
      const double b = slopes_[i + 1] / d[i];
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double t = 3.0 / std::sqrt(s);
        slopes_[i] = t * a * d[i];
        slopes_[i + 1] = t * b * d[i];
      }
    }
  }

  double interpolate(double z) const {
    auto it = std::upper_bound(z_.begin(), z_.end(), z);
    std::size_t i = it == z_.begin() ? 0 : static_cast<std::size_t>(it - z_.begin()) - 1;
    if (i >= z_.size() - 1) i = z_.size() - 2;
    const double h = z_[i + 1] - z_[i];
    const double t = (z - z_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
           (-2 * t3 + 3 * t2) * p_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
  }

  ProfileKind kind_;
  double span_length_m_;
  double attenuation_per_m_ = 0.0;
  double loss_position_m_ = 0.0;
  double loss_factor_ = 1.0;
  double tilt_db_ = 0.0;
  std::vector<double> z_, p_, slopes_;
};

/// Composed island profile sqrt(p_m p_k p_n / p_cut). All four inputs must be
/// defined on the same span. Throws if the CUT profile vanishes.
inline std::function<double(double)> compose_island_profile(const PowerProfile& p_m,
                                                            const PowerProfile& p_k,
                                                            const PowerProfile& p_n,
                                                            const PowerProfile& p_cut) {
  const double L = p_cut.span_length();
  if (p_m.span_length() != L || p_k.span_length() != L || p_n.span_length() != L)
    throw std::invalid_argument("compose_island_profile: profiles span different lengths");
  return [p_m, p_k, p_n, p_cut](double z) {
    const double cut = p_cut(z);
    if (!(cut > 0.0))
      throw std::domain_error("compose_island_profile: CUT profile vanishes on the span");
    return std::sqrt(p_m(z) * p_k(z) * p_n(z) / cut);
  };
}

// Polynomial representation sum_n c_n z^n of a composed profile in physical z.
struct PolynomialSpp {
  std::vector<double> coefficients;  // c_0 .. c_degree, units m^-n
  int degree = 0;
  double span_length = 0.0;
  double fit_rms_residual = 0.0;
  double fit_max_residual = 0.0;
  bool fit_warning = false;
};

/// Horner evaluation of the fitted polynomial at z (physical meters).
inline double evaluate_polynomial(const PolynomialSpp& spp, double z) {
  if (!(z >= 0.0) || !(z <= spp.span_length))
    throw std::domain_error("evaluate_polynomial: z outside [0, span length]");
  double acc = 0.0;
  for (std::size_t i = spp.coefficients.size(); i-- > 0;) acc = acc * z + spp.coefficients[i];
  return acc;
}

struct FitOptions {
  int node_multiplier = 4;          // Chebyshev sample count = multiplier * (order+1)
  int verification_grid = 1000;     // residual evaluation points
  double warn_residual_factor = 1e-3;  // of the profile peak
};

/// Least-squares polynomial fit of an arbitrary positive profile over [0, L].
/// Samples at first-kind Chebyshev nodes in the normalized coordinate, where
/// discrete orthogonality makes the normal equations diagonal, then rescales
/// exactly to monomial coefficients in physical z. A poor fit sets
/// fit_warning rather than failing; the residuals are reported either way.
inline PolynomialSpp fit_polynomial(const std::function<double(double)>& profile, double L,
                                    int order, const FitOptions& options = {}) {
  if (!(L > 0.0)) throw std::invalid_argument("fit_polynomial: span length must be > 0");
  if (order < 0 || order > kMaxPolynomialOrder)
    throw std::invalid_argument("fit_polynomial: order must be in [0, " +
                                std::to_string(kMaxPolynomialOrder) + "]");
  const int n_coef = order + 1;
  const int n_nodes = std::max(options.node_multiplier, 1) * n_coef;

  // Monomial Vandermonde in t = z/L sampled at first-kind Chebyshev nodes.
  // The Chebyshev grid keeps the condition number near (1+sqrt(2))^order, and
  // the Householder solve runs in long double, so monomial coefficients come
  // out without a basis-conversion amplification step.
  std::vector<std::vector<long double>> a(static_cast<std::size_t>(n_nodes));
  std::vector<long double> rhs(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    const double t = 0.5 * (1.0 + std::cos(kPi * (2.0 * i + 1.0) / (2.0 * n_nodes)));
    auto& row = a[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(n_coef));
    long double tp = 1.0L;
    for (int k = 0; k < n_coef; ++k) {
      row[static_cast<std::size_t>(k)] = tp;
      tp *= t;
    }
    rhs[static_cast<std::size_t>(i)] = profile(t * L);
  }
  // In-place Householder QR least squares.
  for (int k = 0; k < n_coef; ++k) {
    long double norm = 0.0L;
    for (int i = k; i < n_nodes; ++i) norm += a[i][k] * a[i][k];
    norm = std::sqrt(norm);
    if (a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] > 0) norm = -norm;
    std::vector<long double> v(static_cast<std::size_t>(n_nodes), 0.0L);
    for (int i = k; i < n_nodes; ++i) v[i] = a[i][k];
    v[static_cast<std::size_t>(k)] -= norm;
    long double vnorm2 = 0.0L;
    for (int i = k; i < n_nodes; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0L) continue;
    for (int j = k; j < n_coef; ++j) {
      long double dot = 0.0L;
      for (int i = k; i < n_nodes; ++i) dot += v[i] * a[i][j];
      const long double s = 2.0L * dot / vnorm2;
      for (int i = k; i < n_nodes; ++i) a[i][j] -= s * v[i];
    }
    long double dot = 0.0L;
    for (int i = k; i < n_nodes; ++i) dot += v[i] * rhs[i];
    const long double s = 2.0L * dot / vnorm2;
    for (int i = k; i < n_nodes; ++i) rhs[i] -= s * v[i];
  }
  std::vector<long double> coef_t(static_cast<std::size_t>(n_coef), 0.0L);
  for (int k = n_coef - 1; k >= 0; --k) {
    long double acc = rhs[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < n_coef; ++j) acc -= a[k][j] * coef_t[static_cast<std::size_t>(j)];
    coef_t[static_cast<std::size_t>(k)] = acc / a[k][k];
  }

  PolynomialSpp spp;
  spp.degree = order;
  spp.span_length = L;
  spp.coefficients.resize(static_cast<std::size_t>(n_coef));
  long double scale = 1.0L;
  for (int n = 0; n < n_coef; ++n) {
    spp.coefficients[static_cast<std::size_t>(n)] =
        static_cast<double>(coef_t[static_cast<std::size_t>(n)] * scale);
    scale /= L;
  }

  // Residuals on a dense uniform grid.
  const int grid = std::max(options.verification_grid, 2);
  double peak = 0.0;
  long double sq_sum = 0.0L;
  double max_res = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double z = L * static_cast<double>(i) / (grid - 1);
    const double truth = profile(z);
    const double res = std::abs(evaluate_polynomial(spp, z) - truth);
    peak = std::max(peak, std::abs(truth));
    sq_sum += static_cast<long double>(res) * res;
    max_res = std::max(max_res, res);
  }
  spp.fit_rms_residual = static_cast<double>(std::sqrt(static_cast<double>(sq_sum) / grid));
  spp.fit_max_residual = max_res;
  spp.fit_warning = max_res > options.warn_residual_factor * peak;
  return spp;
}

/// Convenience overload fitting a PowerProfile over its own span.
inline PolynomialSpp fit_polynomial(const PowerProfile& profile, int order,
                                    const FitOptions& options = {}) {
  return fit_polynomial([&profile](double z) { return profile(z); }, profile.span_length(),
                        order, options);
}

/// Two-column CSV (z_meters, normalized_power), comma or whitespace separated,
/// optional header line.
inline PowerProfile load_tabulated_csv(std::istream& in, double span_length_m) {
  std::vector<double> z, p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream fields(cleaned);
    double zi = 0.0, pi = 0.0;
    if (!(fields >> zi >> pi)) {
      if (lineno == 1 || cleaned.find_first_not_of(" \t\r") == std::string::npos)
        continue;  // header or blank line
      throw std::invalid_argument("profile csv: line " + std::to_string(lineno) +
                                  ": expected two numeric columns");
    }
    z.push_back(zi);
    p.push_back(pi);
  }
  return PowerProfile::tabulated(std::move(z), std::move(p), span_length_m);
}

inline PowerProfile load_tabulated_csv(const std::string& path, double span_length_m) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("profile csv: cannot open " + path);
  return load_tabulated_csv(in, span_length_m);
}

}  // namespace pcfm
