#include "selftrap/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace selftrap::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

// Crossovers between the small-argument and large-argument branches.
constexpr double kErfcxSwitch = 2.5;
constexpr double kE1Switch = 1.0;
constexpr double kK0Switch = 2.0;

// exp(x^2) erfc(x) = 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm.
double erfcx_continued_fraction(double x) {
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = x + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

// E_1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < kEps * std::abs(sum)) break;
  }
  return -euler_gamma - std::log(x) - sum;
}

// exp(x) E_1(x) from the even continued fraction
// 1/(x+1- 1/(x+3- 4/(x+5- ...))), modified Lentz.
double exp_e1_continued_fraction(double x) {
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

// K_0(x) = -(ln(x/2) + gamma) I_0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2
double k0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double i0 = 1.0;
  double harmonic = 0.0;
  double tail = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail += harmonic * term;
    if (term < kEps * i0 && harmonic * term < kEps * std::abs(tail)) break;
  }
  return -(std::log(0.5 * x) + euler_gamma) * i0 + tail;
}

// Steed's method for the second continued fraction of K_nu at nu = 0
// (Temme's formulation). Converges quickly for x >= 2.
double k0_steed(double x) {
  const double a1 = 0.25;  // 1/4 - nu^2
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double delh = d;
  double h = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < kMaxIter; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
}

}  // namespace

double erfcx(double x) {
  if (!std::isfinite(x) || x < 0.0) throw std::domain_error("erfcx: argument must be finite and >= 0");
  if (x < kErfcxSwitch) return std::exp(x * x) * std::erfc(x);
  return erfcx_continued_fraction(x);
}

double exp_e1(double x) {
  if (!(x > 0.0) || std::isnan(x)) throw std::domain_error("exp_e1: argument must be > 0");
  if (std::isinf(x)) return 0.0;
  if (x < kE1Switch) return std::exp(x) * e1_series(x);
  return exp_e1_continued_fraction(x);
}

double bessel_k0(double x) {
  if (!(x > 0.0) || std::isnan(x)) throw std::domain_error("bessel_k0: argument must be > 0");
  if (std::isinf(x)) return 0.0;
  if (x <= kK0Switch) return k0_series(x);
  return k0_steed(x);
}

}  // namespace selftrap::specfun
