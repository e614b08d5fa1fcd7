#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "selftrap/fitting.hpp"

using namespace selftrap;
using namespace selftrap::fitting;
using std::numbers::pi;

namespace {

std::vector<double> sample(const RadialGrid& g, auto&& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.nodes()[i]);
  return v;
}

// Grid-normalized copy; the grid norm of a smooth profile differs from its
// continuum norm by O(h^2) and the fit requires exact normalization.
std::vector<double> normalized(const RadialGrid& g, std::vector<double> v) {
  const double s = 1.0 / std::sqrt(g.norm2(v));
  for (double& x : v) x *= s;
  return v;
}

}  // namespace

TEST_CASE("sech normalization") {
  boost::math::quadrature::exp_sinh<double> rule;
  for (int d = 1; d <= 3; ++d) {
    for (double lambda : {0.3, 1.0, 2.0}) {
      const double ref = unit_sphere_surface(d) *
                         rule.integrate([&](double r) { return std::pow(r, d - 1) / std::pow(std::cosh(r / lambda), 2); });
      CHECK(sech_inverse_norm2(lambda, d) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  CHECK(sech_profile(2.0, 1, 0.0) == doctest::Approx(0.5));  // (2 lambda)^{-1/2}
  CHECK(sech_inverse_norm2(1.0, 3) == doctest::Approx(4.0 * pi * pi * pi / 12.0));
}

TEST_CASE("Gaussian family is unit-normalized") {
  boost::math::quadrature::exp_sinh<double> rule;
  for (int d = 1; d <= 3; ++d) {
    const double sigma = 1.7;
    const double norm = unit_sphere_surface(d) * rule.integrate([&](double r) {
      const double g = gaussian_profile(sigma, d, r);
      return std::pow(r, d - 1) * g * g;
    });
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("self-fits recover widths") {
  for (int d = 1; d <= 3; ++d) {
    // Fine enough that the sampled continuum profiles pass the norm check as is.
    const RadialGrid g(d, 40.0, 20001);
    const auto gauss = sample(g, [&](double r) { return gaussian_profile(3.0, d, r); });
    const WidthFit fg = fit_gaussian(g, gauss);
    CHECK(fg.width == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fg.residual < 1e-12);

    const auto sech = sample(g, [&](double r) { return sech_profile(2.0, d, r); });
    const WidthFit fs = fit_sech(g, sech);
    CHECK(fs.width == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fs.residual < 1e-12);

    CHECK(fit_gaussian(g, sech).residual > 1e-6);

    const FitResult rg = r_fit(g, gauss);
    CHECK(rg.r_fit == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(rg.ell_loc == rg.sigma);
    const FitResult rs = r_fit(g, sech);
    CHECK(rs.r_fit == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rs.ell_loc == rs.lambda);
    CHECK_FALSE(rs.degenerate);
  }
}

TEST_CASE("width recovery across scales") {
  for (int d = 1; d <= 3; ++d) {
    const RadialGrid g(d, 64.0, 1025);
    const double h = g.spacing();
    for (double w = 5.0 * h; w <= 16.0; w *= 1.7) {
      const auto gauss = normalized(g, sample(g, [&](double r) { return gaussian_profile(w, d, r); }));
      CHECK(std::abs(fit_gaussian(g, gauss).width / w - 1.0) < 1e-4);
      const auto sech = normalized(g, sample(g, [&](double r) { return sech_profile(w, d, r); }));
      CHECK(std::abs(fit_sech(g, sech).width / w - 1.0) < 1e-4);
    }
  }
}

TEST_CASE("discriminator") {
  CHECK(discriminator(0.3, 0.1) == doctest::Approx(0.5));
  CHECK(discriminator(0.1, 0.3) == doctest::Approx(-0.5));
  CHECK(discriminator(0.0, 0.0) == 0.0);
  for (double a : {1e-12, 0.01, 1.0}) {
    for (double b : {0.0, 1e-9, 0.5}) {
      CHECK(discriminator(a, b) == -discriminator(b, a));
      CHECK(std::abs(discriminator(a, b)) <= 1.0);
    }
  }
}

TEST_CASE("residuals converge under grid refinement") {
  // Gaussian fit of a sech profile: the residual is a grid quadrature of a
  // smooth integrand, so successive differences shrink by about 4.
  std::vector<double> s;
  for (std::size_t n : {201u, 401u, 801u, 1601u}) {
    const RadialGrid g(2, 20.0, n);
    const auto sech = normalized(g, sample(g, [&](double r) { return sech_profile(1.5, 2, r); }));
    s.push_back(fit_gaussian(g, sech).residual);
  }
  const double order = std::log2((s[1] - s[0]) / (s[2] - s[1]));
  const double order2 = std::log2((s[2] - s[1]) / (s[3] - s[2]));
  CHECK(order > 1.8);
  CHECK(order2 > 1.8);
}

TEST_CASE("non-normalized input is rejected") {
  const RadialGrid g(1, 10.0, 100);
  std::vector<double> chi(g.size(), 0.0);
  chi[0] = 1.0;
  CHECK_THROWS_AS(fit_gaussian(g, chi), std::invalid_argument);
  CHECK_THROWS_AS(r_fit(g, chi), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_profile(0.0, 1, 1.0), std::invalid_argument);
}
