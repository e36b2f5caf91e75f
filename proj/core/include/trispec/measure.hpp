#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "trispec/geometry.hpp"

namespace trispec {

/// How atom keys are interpreted.
enum class AtomKeyKind {
  SquaredNorms,  ///< torus: (|m|^2, |j|^2, |m+j|^2), frequency sqrt(q)
  Degrees,       ///< sphere: spherical-harmonic degrees, frequency sqrt(l(l+1))
};

using AtomKey = std::array<std::int64_t, 3>;

/// One point mass of a joint spectral measure.
///
/// Torus atoms carry an exact integer `count`; their weight is
/// count * count_scale of the owning measure. Sphere atoms carry `weight`
/// directly and leave `count` at zero.
struct SpectralAtom {
  AtomKey key{};
  FrequencyTriple freqs;
  std::int64_t count = 0;
  double weight = 0.0;
};

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x) const noexcept {
    return x >= lo && x < hi;
  }
  [[nodiscard]] bool empty() const noexcept { return !(hi > lo); }
};

/// Product of three half-open intervals in frequency space.
struct Box {
  std::array<Interval, 3> sides{};

  /// tau + [0, 1)^3
  static Box unit_at(const FrequencyTriple& tau);

  [[nodiscard]] bool contains(const FrequencyTriple& f) const noexcept {
    return sides[0].contains(f.t1) && sides[1].contains(f.t2) &&
           sides[2].contains(f.t3);
  }
  [[nodiscard]] bool empty() const noexcept {
    return sides[0].empty() || sides[1].empty() || sides[2].empty();
  }
};

/// Frequency sqrt(l(l+1)) of spherical harmonics of degree l.
[[nodiscard]] double degree_frequency(std::int64_t l) noexcept;

/// Frequency sqrt(q) of lattice vectors with |m|^2 = q.
[[nodiscard]] double lattice_frequency(std::int64_t q) noexcept;

/// Finite atomic measure on R^3, complete below `cutoff`: every basis triple
/// whose three frequencies are <= cutoff is represented. Atoms are sorted by
/// key and keys are unique.
class JointSpectralMeasure {
 public:
  JointSpectralMeasure(ManifoldDescriptor manifold, double cutoff,
                       AtomKeyKind key_kind, double count_scale,
                       std::vector<SpectralAtom> atoms);

  [[nodiscard]] const ManifoldDescriptor& manifold() const noexcept {
    return manifold_;
  }
  [[nodiscard]] double cutoff() const noexcept { return cutoff_; }
  [[nodiscard]] AtomKeyKind key_kind() const noexcept { return key_kind_; }
  /// Weight of one unit of count (torus: (2pi)^{-n}); 0 for real weights.
  [[nodiscard]] double count_scale() const noexcept { return count_scale_; }
  [[nodiscard]] const std::vector<SpectralAtom>& atoms() const noexcept {
    return atoms_;
  }
  [[nodiscard]] bool integer_counts() const noexcept {
    return key_kind_ == AtomKeyKind::SquaredNorms;
  }
  [[nodiscard]] double weight(const SpectralAtom& a) const noexcept {
    return integer_counts() ? count_scale_ * static_cast<double>(a.count)
                            : a.weight;
  }
  [[nodiscard]] double total_mass() const;

  /// Atom with the given key, or nullptr.
  [[nodiscard]] const SpectralAtom* find(const AtomKey& key) const;

 private:
  ManifoldDescriptor manifold_;
  double cutoff_;
  AtomKeyKind key_kind_;
  double count_scale_;
  std::vector<SpectralAtom> atoms_;
};

/// Mass of the atoms inside `box`. Integer counts are summed exactly and
/// scaled once. Throws DomainError if the box reaches past the cutoff.
[[nodiscard]] double box_measure(const JointSpectralMeasure& measure,
                                 const Box& box);

/// Mass with freqs.t1 <= t1, freqs.t2 <= t2 and freqs.t3 >= (1+eps)(t1+t2).
/// Throws DomainError when (1+eps)(t1+t2) exceeds the cutoff.
[[nodiscard]] double tail_sum(const JointSpectralMeasure& measure, double t1,
                              double t2, double eps);

}  // namespace trispec
