#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace selftrap {

struct ScalarMinimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of f on [lo, hi]. Assumes f is
/// unimodal there; stops when the bracket is narrower than tol (absolute).
inline ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                                    double tol = 1e-10, int max_iter = 500) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

/// Bisection for a sign change of g on [lo, hi]; g(lo) and g(hi) must differ
/// in sign.
inline double bisect_root(const std::function<double(double)>& g, double lo, double hi,
                          double tol = 0.0, int max_iter = 200) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (std::signbit(glo) == std::signbit(ghi)) throw std::invalid_argument("bisect_root: no sign change");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || (hi - lo) <= tol) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (std::signbit(gm) == std::signbit(glo)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace selftrap
