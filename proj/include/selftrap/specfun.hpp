#pragma once

namespace selftrap::specfun {

/// Accuracy contract of the routines below (relative error).
struct Accuracy {
  double relative_error = 1e-10;
};

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

/// Scaled exponential integral exp(x) E_1(x) for x > 0. Note E_1(x) = -Ei(-x).
double exp_e1(double x);

/// Modified Bessel function of the second kind K_0(x) for x > 0.
double bessel_k0(double x);

}  // namespace selftrap::specfun
