#include "trispec/sphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "detail/parallel.hpp"
#include "trispec/errors.hpp"

namespace trispec {

namespace {

constexpr std::int64_t kTableSize = 3 * kMaxDegree + 2;

const std::vector<long double>& log_factorial_table() {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(kTableSize);
    long double sum = 0.0L;
    long double carry = 0.0L;  // Kahan compensation
    t[0] = 0.0L;
    for (std::int64_t k = 1; k < kTableSize; ++k) {
      const long double y = std::log(static_cast<long double>(k)) - carry;
      const long double s = sum + y;
      carry = (s - sum) - y;
      sum = s;
      t[k] = sum;
    }
    return t;
  }();
  return table;
}

void require_degrees(const DegreeTriple& l) {
  if (l.l1 < 0 || l.l2 < 0 || l.l3 < 0)
    throw DomainError("degrees must be nonnegative");
  if (l.l1 > kMaxDegree || l.l2 > kMaxDegree || l.l3 > kMaxDegree) {
    std::ostringstream msg;
    msg << "degree triple (" << l.l1 << ", " << l.l2 << ", " << l.l3
        << ") exceeds the log-factorial table (max degree " << kMaxDegree << ")";
    throw ResourceError(msg.str());
  }
}

}  // namespace

bool passes_selection_rule(const DegreeTriple& l) noexcept {
  if (l.l1 < 0 || l.l2 < 0 || l.l3 < 0) return false;
  if ((l.l1 + l.l2 + l.l3) % 2 != 0) return false;
  const std::int64_t lo = l.l1 > l.l2 ? l.l1 - l.l2 : l.l2 - l.l1;
  return l.l3 >= lo && l.l3 <= l.l1 + l.l2;
}

long double log_factorial(std::int64_t k) {
  if (k < 0) throw DomainError("log_factorial: negative argument");
  if (k >= kTableSize) throw ResourceError("log_factorial: argument beyond table");
  return log_factorial_table()[static_cast<std::size_t>(k)];
}

double three_j_zero(const DegreeTriple& l) {
  require_degrees(l);
  if (!passes_selection_rule(l)) return 0.0;
  const auto& lf = log_factorial_table();
  // Sorted so that every permutation sums in the same order.
  std::array<std::int64_t, 3> d{l.l1, l.l2, l.l3};
  std::sort(d.begin(), d.end());
  const std::int64_t big_j = d[0] + d[1] + d[2];
  const std::int64_t g = big_j / 2;
  const long double log_delta = lf[big_j - 2 * d[0]] + lf[big_j - 2 * d[1]] +
                                lf[big_j - 2 * d[2]] - lf[big_j + 1];
  const long double log_mag = 0.5L * log_delta + lf[g] - lf[g - d[0]] -
                              lf[g - d[1]] - lf[g - d[2]];
  const double mag = static_cast<double>(std::exp(log_mag));
  return (g % 2 == 0) ? mag : -mag;
}

double gaunt_square_sum(const DegreeTriple& l) {
  const double w = three_j_zero(l);
  if (w == 0.0) return 0.0;
  const double dims = static_cast<double>(2 * l.l1 + 1) *
                      static_cast<double>(2 * l.l2 + 1) *
                      static_cast<double>(2 * l.l3 + 1);
  return dims / (4.0 * std::numbers::pi) * w * w;
}

JointSpectralMeasure sphere_measure(std::int64_t l_max) {
  if (l_max < 0) throw DomainError("sphere_measure: l_max must be >= 0");
  if (l_max > kMaxSphereDegree) {
    std::ostringstream msg;
    msg << "sphere_measure: l_max " << l_max << " above the supported bound "
        << kMaxSphereDegree;
    throw ResourceError(msg.str());
  }
  std::vector<double> freq(static_cast<std::size_t>(l_max + 1));
  for (std::int64_t l = 0; l <= l_max; ++l) freq[l] = degree_frequency(l);

  std::vector<std::vector<SpectralAtom>> rows(static_cast<std::size_t>(l_max + 1));
  detail::for_each_chunk(rows.size(), [&](std::size_t i) {
    const auto l1 = static_cast<std::int64_t>(i);
    auto& out = rows[i];
    for (std::int64_t l2 = 0; l2 <= l_max; ++l2) {
      const std::int64_t lo = l1 > l2 ? l1 - l2 : l2 - l1;
      const std::int64_t hi = std::min(l1 + l2, l_max);
      for (std::int64_t l3 = lo; l3 <= hi; l3 += 2) {
        const DegreeTriple d{l1, l2, l3};
        const double w = gaunt_square_sum(d);
        if (w == 0.0) continue;
        out.push_back(SpectralAtom{{l1, l2, l3}, {freq[l1], freq[l2], freq[l3]}, 0, w});
      }
    }
  });

  std::vector<SpectralAtom> atoms;
  for (auto& r : rows) atoms.insert(atoms.end(), r.begin(), r.end());
  return JointSpectralMeasure(ManifoldDescriptor::sphere2(), freq[l_max],
                              AtomKeyKind::Degrees, 0.0, std::move(atoms));
}

}  // namespace trispec
