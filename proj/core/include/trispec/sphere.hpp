#pragma once

#include <cstdint>

#include "trispec/measure.hpp"

namespace trispec {

/// Spherical-harmonic degrees of three eigenspaces on S^2.
struct DegreeTriple {
  std::int64_t l1 = 0;
  std::int64_t l2 = 0;
  std::int64_t l3 = 0;
};

/// Largest degree accepted by three_j_zero and gaunt_square_sum.
inline constexpr std::int64_t kMaxDegree = 10'000;

/// Largest l_max accepted by sphere_measure.
inline constexpr std::int64_t kMaxSphereDegree = 1'000;

/// True when |l1 - l2| <= l3 <= l1 + l2 and l1 + l2 + l3 is even.
[[nodiscard]] bool passes_selection_rule(const DegreeTriple& l) noexcept;

/// log(k!) for 0 <= k <= 3 * kMaxDegree + 1, from a table accumulated in
/// extended precision with compensated summation.
[[nodiscard]] long double log_factorial(std::int64_t k);

/// Wigner 3j symbol (l1 l2 l3; 0 0 0) by the closed product formula; no
/// alternating sums are involved. Throws ResourceError above kMaxDegree.
[[nodiscard]] double three_j_zero(const DegreeTriple& l);

/// Sum over all magnetic numbers of |<Y_{l1} Y_{l2}, Y_{l3}>|^2 for an
/// orthonormal basis of each eigenspace:
///   (2l1+1)(2l2+1)(2l3+1)/(4pi) * three_j_zero(l)^2.
[[nodiscard]] double gaunt_square_sum(const DegreeTriple& l);

/// Joint spectral measure of the round S^2 with all degrees <= l_max. Atoms
/// are keyed by degree triple and sit at frequencies sqrt(l(l+1)).
[[nodiscard]] JointSpectralMeasure sphere_measure(std::int64_t l_max);

}  // namespace trispec
