#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace selftrap {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(std::size_t order) : nodes(order), weights(order) {
    const std::size_t n = order;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  /// Composite rule: integral of f over [a, b] split into equal panels.
  template <class F>
  double integrate(F&& f, double a, double b, std::size_t panels) const {
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * width;
      double s = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + 0.5 * width * nodes[i]);
      total += 0.5 * width * s;
    }
    return total;
  }
};

}  // namespace selftrap
