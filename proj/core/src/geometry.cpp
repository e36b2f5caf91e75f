#include "trispec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "detail/parallel.hpp"
#include "detail/quadrature.hpp"
#include "trispec/errors.hpp"

namespace trispec {

namespace {

constexpr double kPi = std::numbers::pi;

double leray_from_area(int n, const FrequencyTriple& t, double twice_area) {
  return unit_sphere_volume(n - 1) * unit_sphere_volume(n - 2) * t.t1 * t.t2 * t.t3 *
         std::pow(twice_area, n - 3);
}

void require_positive(const FrequencyTriple& t) {
  for (double v : t.as_array()) {
    if (!std::isfinite(v) || v <= 0.0) {
      std::ostringstream msg;
      msg << "frequency triple (" << t.t1 << ", " << t.t2 << ", " << t.t3
          << ") must have finite, strictly positive components";
      throw DomainError(msg.str());
    }
  }
}

void require_good(const FrequencyTriple& t, const char* what) {
  const TriangleClass cls = classify(t, 0.0);
  if (cls.kind != TriangleKind::Good) {
    std::ostringstream msg;
    msg << what << ": (" << t.t1 << ", " << t.t2 << ", " << t.t3
        << ") is triangle-" << to_string(cls.kind) << " (margin "
        << cls.margin << "); a nondegenerate triangle is required";
    throw DomainError(msg.str());
  }
}

}  // namespace

double FrequencyTriple::norm() const noexcept {
  return std::sqrt(t1 * t1 + t2 * t2 + t3 * t3);
}

std::string to_string(TriangleKind kind) {
  switch (kind) {
    case TriangleKind::Good:
      return "good";
    case TriangleKind::Bad:
      return "bad";
    case TriangleKind::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

ManifoldDescriptor ManifoldDescriptor::torus(int n) {
  if (n < 2) throw DomainError("torus dimension must be >= 2");
  return {ManifoldModel::Torus, n, std::pow(2.0 * kPi, n), kPi};
}

ManifoldDescriptor ManifoldDescriptor::sphere2() {
  return {ManifoldModel::Sphere2, 2, 4.0 * kPi, kPi};
}

std::string ManifoldDescriptor::name() const {
  if (model == ManifoldModel::Sphere2) return "sphere2";
  return "torus" + std::to_string(dim);
}

double default_tolerance(const FrequencyTriple& t) noexcept {
  return 1e-9 * t.norm();
}

TriangleClass classify(const FrequencyTriple& t, double tolerance) {
  require_positive(t);
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be >= 0");
  const double margin = std::min({t.t1 + t.t2 - t.t3, t.t2 + t.t3 - t.t1,
                                  t.t3 + t.t1 - t.t2});
  TriangleKind kind = TriangleKind::Degenerate;
  if (margin > tolerance) {
    kind = TriangleKind::Good;
  } else if (margin < -tolerance) {
    kind = TriangleKind::Bad;
  }
  return {kind, margin};
}

double heron_area(const FrequencyTriple& t) {
  require_good(t, "heron_area");
  std::array<double, 3> s = t.as_array();
  std::sort(s.begin(), s.end(), std::greater<>());
  const double a = s[0];
  const double b = s[1];
  const double c = s[2];
  // Parenthesisation matters; see Kahan, "Miscalculating Area and Angles of
  // a Needle-like Triangle".
  const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return 0.25 * std::sqrt(p);
}

double unit_sphere_volume(int k) {
  if (k < 0) throw DomainError("unit_sphere_volume: dimension must be >= 0");
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double unit_ball_volume(int n) {
  if (n < 1) throw DomainError("unit_ball_volume: dimension must be >= 1");
  return unit_sphere_volume(n - 1) / n;
}

double leray_volume(int n, const FrequencyTriple& t) {
  if (n < 2) throw DomainError("leray_volume: dimension must be >= 2");
  return leray_from_area(n, t, 2.0 * heron_area(t));
}

MonteCarloEstimate leray_volume_oracle(int n, const FrequencyTriple& t,
                                       double shell_width,
                                       std::int64_t samples,
                                       std::uint64_t seed) {
  if (n < 2) throw DomainError("leray_volume_oracle: dimension must be >= 2");
  require_good(t, "leray_volume_oracle");
  const double margin = classify(t, 0.0).margin;
  if (!(shell_width > 0.0) || shell_width >= margin) {
    std::ostringstream msg;
    msg << "leray_volume_oracle: shell width " << shell_width
        << " must lie in (0, margin = " << margin << ")";
    throw DomainError(msg.str());
  }
  if (samples < 10'000)
    throw DomainError("leray_volume_oracle: at least 1e4 samples required");

  const double h = shell_width;
  const double lo1 = t.t1 - 0.5 * h, hi1 = t.t1 + 0.5 * h;
  const double lo2 = t.t2 - 0.5 * h, hi2 = t.t2 + 0.5 * h;
  const double lo3sq = (t.t3 - 0.5 * h) * (t.t3 - 0.5 * h);
  const double hi3sq = (t.t3 + 0.5 * h) * (t.t3 + 0.5 * h);
  const double lo1n = std::pow(lo1, n), hi1n = std::pow(hi1, n);
  const double lo2n = std::pow(lo2, n), hi2n = std::pow(hi2, n);

  constexpr std::int64_t kChunk = 1 << 16;
  const auto chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  std::vector<std::int64_t> hits(chunks, 0);

  detail::for_each_chunk(chunks, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c),
                      static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> xi(n), eta(n);

    auto shell_point = [&](std::vector<double>& v, double lo_n, double hi_n) {
      double sq = 0.0;
      do {
        sq = 0.0;
        for (double& x : v) {
          x = gauss(rng);
          sq += x * x;
        }
      } while (sq == 0.0);
      const double r = std::pow(lo_n + unif(rng) * (hi_n - lo_n), 1.0 / n);
      const double scale = r / std::sqrt(sq);
      for (double& x : v) x *= scale;
    };

    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(samples, begin + kChunk);
    std::int64_t local = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      shell_point(xi, lo1n, hi1n);
      shell_point(eta, lo2n, hi2n);
      double sq = 0.0;
      for (int k = 0; k < n; ++k) sq += (xi[k] + eta[k]) * (xi[k] + eta[k]);
      if (sq >= lo3sq && sq < hi3sq) ++local;
    }
    hits[c] = local;
  });

  std::int64_t accepted = 0;
  for (auto v : hits) accepted += v;

  const double ball = unit_ball_volume(n);
  const double shells = ball * (hi1n - lo1n) * ball * (hi2n - lo2n);
  const double p = static_cast<double>(accepted) / static_cast<double>(samples);
  const double scale = shells / (h * h * h);
  MonteCarloEstimate out;
  out.estimate = scale * p;
  out.std_error = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  out.samples = samples;
  out.accepted = accepted;
  return out;
}

double interface_integral(int n, double t1, double t2, int quad_nodes) {
  if (n < 2) throw DomainError("interface_integral: dimension must be >= 2");
  if (!(t1 > 0.0) || !(t2 > 0.0) || !std::isfinite(t1) || !std::isfinite(t2))
    throw DomainError("interface_integral: t1 and t2 must be positive");
  if (quad_nodes < 64)
    throw DomainError("interface_integral: at least 64 quadrature nodes");

  // s^2 = t1^2 + t2^2 - 2 t1 t2 cos(theta), ds = t1 t2 sin(theta) / s dtheta.
  const detail::GaussLegendre rule = detail::gauss_legendre(quad_nodes);
  double sum = 0.0;
  for (int i = 0; i < quad_nodes; ++i) {
    const double theta = 0.5 * kPi * (rule.nodes[i] + 1.0);
    const double half = 0.5 * theta;
    // 2 t1 t2 (1 - cos theta) = 4 t1 t2 sin^2(theta/2) avoids cancellation
    // near theta = 0.
    const double d = t1 - t2;
    const double s = std::sqrt(d * d + 4.0 * t1 * t2 * std::sin(half) * std::sin(half));
    if (!(s > 0.0)) continue;
    // Twice the area is t1 t2 sin(theta) exactly; Heron on s would lose
    // digits next to both collinear endpoints.
    const double twice_area = t1 * t2 * std::sin(theta);
    const double jacobian = twice_area / s;
    sum += rule.weights[i] * leray_from_area(n, {t1, t2, s}, twice_area) * jacobian;
  }
  return 0.5 * kPi * sum;
}

}  // namespace trispec
