#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace trispec {

/// A point (t1, t2, t3) of frequency space; read as candidate triangle side
/// lengths.
struct FrequencyTriple {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  [[nodiscard]] double norm() const noexcept;
  [[nodiscard]] FrequencyTriple scaled(double s) const noexcept {
    return {s * t1, s * t2, s * t3};
  }
  [[nodiscard]] std::array<double, 3> as_array() const noexcept {
    return {t1, t2, t3};
  }

  friend bool operator==(const FrequencyTriple&,
                         const FrequencyTriple&) = default;
};

enum class TriangleKind { Good, Bad, Degenerate };

[[nodiscard]] std::string to_string(TriangleKind kind);

struct TriangleClass {
  TriangleKind kind = TriangleKind::Degenerate;
  /// min(t1+t2-t3, t2+t3-t1, t3+t1-t2)
  double margin = 0.0;
};

enum class ManifoldModel { Torus, Sphere2 };

/// The model manifolds with exactly computable joint spectral measures.
struct ManifoldDescriptor {
  ManifoldModel model = ManifoldModel::Torus;
  int dim = 2;
  double volume = 0.0;
  double injectivity_radius = 0.0;

  /// Flat square torus R^n / 2piZ^n.
  static ManifoldDescriptor torus(int n);
  /// Round unit sphere S^2.
  static ManifoldDescriptor sphere2();

  [[nodiscard]] std::string name() const;

  friend bool operator==(const ManifoldDescriptor&,
                         const ManifoldDescriptor&) = default;
};

/// Relative degenerate band used when callers do not pass a tolerance:
/// 1e-9 * |t|.
[[nodiscard]] double default_tolerance(const FrequencyTriple& t) noexcept;

/// Classifies t as a triangle-good, triangle-bad or degenerate point.
/// Throws DomainError for a nonpositive or non-finite component.
[[nodiscard]] TriangleClass classify(const FrequencyTriple& t,
                                     double tolerance);

/// Area of the Euclidean triangle with sides t, using the cancellation-free
/// ordering of Heron's product (sides sorted descending).
[[nodiscard]] double heron_area(const FrequencyTriple& t);

/// Surface measure of the unit k-sphere in R^{k+1}; unit_sphere_volume(0) == 2.
[[nodiscard]] double unit_sphere_volume(int k);

/// Volume of the unit ball in R^n.
[[nodiscard]] double unit_ball_volume(int n);

/// Leray measure of the configuration space of triangles with side lengths t
/// in R^n x R^n:
///   vol S^{n-1} * vol S^{n-2} * t1 t2 t3 * (2 area)^{n-3}.
/// Positively homogeneous of degree 2n-3.
[[nodiscard]] double leray_volume(int n, const FrequencyTriple& t);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::int64_t accepted = 0;
};

/// Thickened-level-set estimate of leray_volume that never touches the
/// closed form: samples xi, eta uniformly in the shells |xi| in t1 +- h/2,
/// |eta| in t2 +- h/2 and counts how often |xi + eta| lands in t3 +- h/2.
/// Deterministic for fixed (seed, samples) regardless of thread count.
[[nodiscard]] MonteCarloEstimate leray_volume_oracle(int n,
                                                     const FrequencyTriple& t,
                                                     double shell_width,
                                                     std::int64_t samples,
                                                     std::uint64_t seed);

/// Integral of leray_volume(n, (t1, t2, s)) over s in (|t1-t2|, t1+t2),
/// evaluated in the angle variable of the law of cosines with Gauss-Legendre
/// nodes so the (2 area)^{n-3} endpoint behaviour never enters the integrand.
[[nodiscard]] double interface_integral(int n, double t1, double t2,
                                        int quad_nodes = 4096);

}  // namespace trispec
