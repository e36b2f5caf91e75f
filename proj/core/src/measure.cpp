#include "trispec/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trispec/errors.hpp"

namespace trispec {

Box Box::unit_at(const FrequencyTriple& tau) {
  return Box{{Interval{tau.t1, tau.t1 + 1.0}, Interval{tau.t2, tau.t2 + 1.0},
              Interval{tau.t3, tau.t3 + 1.0}}};
}

double degree_frequency(std::int64_t l) noexcept {
  const double x = static_cast<double>(l);
  return std::sqrt(x * (x + 1.0));
}

double lattice_frequency(std::int64_t q) noexcept {
  return std::sqrt(static_cast<double>(q));
}

JointSpectralMeasure::JointSpectralMeasure(ManifoldDescriptor manifold,
                                           double cutoff, AtomKeyKind key_kind,
                                           double count_scale,
                                           std::vector<SpectralAtom> atoms)
    : manifold_(manifold),
      cutoff_(cutoff),
      key_kind_(key_kind),
      count_scale_(count_scale),
      atoms_(std::move(atoms)) {
  if (!(cutoff_ >= 0.0)) throw DomainError("measure cutoff must be >= 0");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const SpectralAtom& a, const SpectralAtom& b) { return a.key < b.key; });
  // Merge atoms with equal keys.
  std::vector<SpectralAtom> merged;
  merged.reserve(atoms_.size());
  for (auto& a : atoms_) {
    if (a.weight < 0.0 || a.count < 0)
      throw DomainError("spectral atoms must have nonnegative weight");
    if (!merged.empty() && merged.back().key == a.key) {
      merged.back().count += a.count;
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  atoms_ = std::move(merged);
}

double JointSpectralMeasure::total_mass() const {
  if (integer_counts()) {
    std::int64_t total = 0;
    for (const auto& a : atoms_) total += a.count;
    return count_scale_ * static_cast<double>(total);
  }
  long double total = 0.0L;
  for (const auto& a : atoms_) total += a.weight;
  return static_cast<double>(total);
}

const SpectralAtom* JointSpectralMeasure::find(const AtomKey& key) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), key,
      [](const SpectralAtom& a, const AtomKey& k) { return a.key < k; });
  if (it == atoms_.end() || it->key != key) return nullptr;
  return &*it;
}

double box_measure(const JointSpectralMeasure& measure, const Box& box) {
  if (box.empty()) return 0.0;
  for (const auto& side : box.sides) {
    if (side.hi > measure.cutoff()) {
      std::ostringstream msg;
      msg << "box_measure: box side [" << side.lo << ", " << side.hi
          << ") exceeds the measure cutoff " << measure.cutoff();
      throw DomainError(msg.str());
    }
  }
  if (measure.integer_counts()) {
    std::int64_t count = 0;
    for (const auto& a : measure.atoms())
      if (box.contains(a.freqs)) count += a.count;
    return measure.count_scale() * static_cast<double>(count);
  }
  long double sum = 0.0L;
  for (const auto& a : measure.atoms())
    if (box.contains(a.freqs)) sum += a.weight;
  return static_cast<double>(sum);
}

double tail_sum(const JointSpectralMeasure& measure, double t1, double t2,
                double eps) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw DomainError("tail_sum: t1 and t2 must be positive");
  const double threshold = (1.0 + eps) * (t1 + t2);
  // Pairs below (t1, t2) reach up to t1 + t2 in the third slot; all of them
  // must be represented when eps < 0.
  const double needed = std::max(threshold, t1 + t2);
  if (needed > measure.cutoff()) {
    std::ostringstream msg;
    msg << "tail_sum: threshold requires cutoff >= " << needed
        << " but the measure stops at " << measure.cutoff();
    throw DomainError(msg.str());
  }
  auto selected = [&](const SpectralAtom& a) {
    return a.freqs.t1 <= t1 && a.freqs.t2 <= t2 && a.freqs.t3 >= threshold;
  };
  if (measure.integer_counts()) {
    std::int64_t count = 0;
    for (const auto& a : measure.atoms())
      if (selected(a)) count += a.count;
    return measure.count_scale() * static_cast<double>(count);
  }
  long double sum = 0.0L;
  for (const auto& a : measure.atoms())
    if (selected(a)) sum += a.weight;
  return static_cast<double>(sum);
}

}  // namespace trispec
