#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace trispec::detail {

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;
};

// Newton iteration on the three-term Legendre recurrence, in extended
// precision: 1 - x^2 loses digits for nodes next to the endpoints.
inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L;
      long double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    const double w = static_cast<double>(2.0L / ((1.0L - x) * (1.0L + x) * dp * dp));
    rule.nodes[i] = -static_cast<double>(x);
    rule.nodes[n - 1 - i] = static_cast<double>(x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace trispec::detail
