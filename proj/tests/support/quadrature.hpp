#pragma once

// Self-contained adaptive Gauss-Kronrod 15(7) integrator used as the
// independent reference for unit tests. Deliberately shares no code with the
// library under test.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testsupport {

namespace gk {

inline constexpr double nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

}  // namespace gk

template <typename F>
void gk15(F&& f, double a, double b, double& result, double& error) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 7; ++i) {
    fk[i] = f(mid - half * gk::nodes[i]);
    fk[14 - i] = f(mid + half * gk::nodes[i]);
  }
  fk[7] = f(mid);
  double rk = gk::kronrod_w[7] * fk[7];
  double rg = gk::gauss_w[3] * fk[7];
  for (int i = 0; i < 7; ++i) {
    rk += gk::kronrod_w[i] * (fk[i] + fk[14 - i]);
    if (i % 2 == 1) rg += gk::gauss_w[i / 2] * (fk[i] + fk[14 - i]);
  }
  result = rk * half;
  error = std::abs((rk - rg) * half);
}

// Adaptive bisection to an absolute-or-relative tolerance.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 1e-300, int max_intervals = 200000) {
  struct Seg {
    double a, b, value, error;
  };
  std::vector<Seg> segs;
  double v, e;
  gk15(f, a, b, v, e);
  segs.push_back({a, b, v, e});
  int evals = 1;
  while (evals < max_intervals) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    if (err <= rel_tol * std::abs(total) + abs_tol) return total;
    Seg s = segs[worst];
    segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(worst));
    const double mid = 0.5 * (s.a + s.b);
    Seg left{s.a, mid, 0, 0}, right{mid, s.b, 0, 0};
    gk15(f, left.a, left.b, left.value, left.error);
    gk15(f, right.a, right.b, right.value, right.error);
    segs.push_back(left);
    segs.push_back(right);
    evals += 2;
  }
  double total = 0.0;
  for (const auto& s : segs) total += s.value;
  return total;
}

inline std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                              double a, double b, double rel_tol = 1e-12) {
  const double re = integrate([&](double t) { return f(t).real(); }, a, b, rel_tol);
  const double im = integrate([&](double t) { return f(t).imag(); }, a, b, rel_tol);
  return {re, im};
}

}  // namespace testsupport
