#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "trispec/measure.hpp"

namespace trispec {

/// Lattice vector in Z^n, n <= 4; unused trailing coordinates are zero.
using LatticeVector = std::array<std::int32_t, 4>;

struct ShellQuery {
  int n = 2;
  std::int64_t q = 0;  ///< squared Euclidean norm
};

struct TriangleCountQuery {
  int n = 2;
  std::int64_t q1 = 1;
  std::int64_t q2 = 1;
  std::int64_t q3 = 1;
};

/// All v in Z^n with |v|^2 = q, in lexicographic order. n in {2, 3, 4}.
[[nodiscard]] std::vector<LatticeVector> enumerate_shell(const ShellQuery& query);

/// #{(m, j) : |m|^2 = q1, |j|^2 = q2, |m + j|^2 = q3}, exactly.
[[nodiscard]] std::int64_t triangle_count(const TriangleCountQuery& query);

/// #{m in Z^n : r_lo <= |m| < r_hi}, exactly.
[[nodiscard]] std::int64_t annulus_count(int n, double r_lo, double r_hi);

/// Lattice points grouped by shell.
struct Shell {
  std::int64_t q = 0;
  std::vector<LatticeVector> points;
};

/// Nonempty shells with r_lo <= sqrt(q) < r_hi, ascending in q.
[[nodiscard]] std::vector<Shell> annulus_shells(int n, double r_lo, double r_hi);

struct TorusMeasureOptions {
  /// Construction aborts with ResourceError once this many atoms exist.
  std::int64_t max_atoms = 20'000'000;
};

/// Exact joint spectral measure of the flat torus R^n / 2piZ^n below
/// `cutoff`: one atom per (q1, q2, q3) with nonzero triangle count and all
/// sqrt(q_i) <= cutoff, weight (2pi)^{-n} * count.
[[nodiscard]] JointSpectralMeasure torus_measure(int n, double cutoff,
                                                 TorusMeasureOptions options = {});

/// The same torus measure without materialized atoms. Box and tail queries
/// enumerate the relevant lattice annuli on demand, so the cutoff can be far
/// larger than a materialized measure allows.
class TorusLattice {
 public:
  TorusLattice(int n, double cutoff);

  [[nodiscard]] int dim() const noexcept { return n_; }
  [[nodiscard]] double cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] const ManifoldDescriptor& manifold() const noexcept {
    return manifold_;
  }
  /// (2pi)^{-n}
  [[nodiscard]] double count_scale() const noexcept { return count_scale_; }

  /// Exact number of pairs (m, j) with (|m|, |j|, |m+j|) in the box.
  [[nodiscard]] std::int64_t box_count(const Box& box) const;
  /// Pairs with |m| <= t1, |j| <= t2, |m + j| >= threshold.
  [[nodiscard]] std::int64_t tail_count(double t1, double t2,
                                        double threshold) const;

 private:
  int n_;
  double cutoff_;
  ManifoldDescriptor manifold_;
  double count_scale_;
};

[[nodiscard]] double box_measure(const TorusLattice& lattice, const Box& box);
[[nodiscard]] double tail_sum(const TorusLattice& lattice, double t1, double t2,
                              double eps);

}  // namespace trispec
