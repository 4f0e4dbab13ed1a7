#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pcfm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Kahan-Babuska-Neumaier compensated accumulator. Used wherever the spec of a
// computation fixes the reduction order; add() must be called in that order.
template <typename T = double>
class CompensatedSum {
 public:
  void add(T value) {
    T t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      comp_ += (sum_ - t) + value;
    } else {
      comp_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_ = 0;
  T comp_ = 0;
};

namespace detail {

// Exact binomial coefficients up to n = 64 (largest entry 1.8e18, below the
// 64-bit mantissa of long double).
inline long double binomial_exact(int n, int k) {
  static const auto table = [] {
    constexpr int N = 65;
    std::vector<std::vector<long double>> t(N);
    for (int i = 0; i < N; ++i) {
      t[i].resize(i + 1);
      t[i][0] = t[i][i] = 1.0L;
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  if (k < 0 || k > n) return 0.0L;
  if (n < 65) return table[n][k];
  return std::exp(std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) -
                  std::lgamma(n - k + 1.0L));
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

}  // namespace detail

}  // namespace pcfm
