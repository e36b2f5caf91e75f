#include "trispec/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/parallel.hpp"
#include "trispec/errors.hpp"

namespace trispec {

namespace {

std::int64_t isqrt(std::int64_t v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

void require_supported(int n, const char* what) {
  if (n < 2 || n > 4) {
    std::ostringstream msg;
    msg << what << ": dimension " << n << " unsupported (need 2, 3 or 4)";
    throw DomainError(msg.str());
  }
}

// Smallest q >= 0 with sqrt(q) >= r.
std::int64_t first_q_at_least(double r) {
  if (!(r > 0.0)) return 0;
  auto q = static_cast<std::int64_t>(std::floor(r * r));
  q = std::max<std::int64_t>(q - 2, 0);
  while (lattice_frequency(q) < r) ++q;
  return q;
}

// Largest q with sqrt(q) < r, or -1 if none.
std::int64_t last_q_below(double r) {
  if (!(r > 0.0)) return -1;
  return first_q_at_least(r) - 1;
}

// Largest q with sqrt(q) <= r, or -1 if none.
std::int64_t last_q_at_most(double r) {
  if (r < 0.0) return -1;
  auto q = static_cast<std::int64_t>(std::floor(r * r)) + 2;
  while (q >= 0 && lattice_frequency(q) > r) --q;
  return q;
}

// Appends every v with q_lo <= |v|^2 <= q_hi, lexicographic order.
void enumerate_range(int n, std::int64_t q_lo, std::int64_t q_hi,
                     std::vector<LatticeVector>& out) {
  LatticeVector v{};
  auto recurse = [&](auto&& self, int dim, std::int64_t used) -> void {
    const std::int64_t budget = q_hi - used;
    if (dim == n - 1) {
      // Last coordinate: y^2 in [q_lo - used, budget].
      const std::int64_t need = q_lo - used;
      const std::int64_t ymax = isqrt(budget);
      const std::int64_t ymin = need <= 0 ? 0 : isqrt(need - 1) + 1;
      if (ymin > ymax) return;
      for (std::int64_t y = -ymax; y <= ymax; ++y) {
        if (y > -ymin && y < ymin) continue;
        v[dim] = static_cast<std::int32_t>(y);
        out.push_back(v);
      }
      v[dim] = 0;
      return;
    }
    const std::int64_t xmax = isqrt(budget);
    for (std::int64_t x = -xmax; x <= xmax; ++x) {
      v[dim] = static_cast<std::int32_t>(x);
      self(self, dim + 1, used + x * x);
    }
    v[dim] = 0;
  };
  if (q_hi < 0 || q_lo > q_hi) return;
  recurse(recurse, 0, 0);
}

std::int64_t norm2(const LatticeVector& v, int n) {
  std::int64_t s = 0;
  for (int k = 0; k < n; ++k) s += static_cast<std::int64_t>(v[k]) * v[k];
  return s;
}

std::int64_t dot(const LatticeVector& a, const LatticeVector& b, int n) {
  std::int64_t s = 0;
  for (int k = 0; k < n; ++k) s += static_cast<std::int64_t>(a[k]) * b[k];
  return s;
}

std::vector<Shell> group_shells(int n, std::vector<LatticeVector> points) {
  std::stable_sort(points.begin(), points.end(),
                   [n](const LatticeVector& a, const LatticeVector& b) {
                     return norm2(a, n) < norm2(b, n);
                   });
  std::vector<Shell> shells;
  for (const auto& p : points) {
    const std::int64_t q = norm2(p, n);
    if (shells.empty() || shells.back().q != q) shells.push_back(Shell{q, {}});
    shells.back().points.push_back(p);
  }
  return shells;
}

std::vector<Shell> shells_in_q_range(int n, std::int64_t q_lo, std::int64_t q_hi) {
  std::vector<LatticeVector> points;
  enumerate_range(n, std::max<std::int64_t>(q_lo, 0), q_hi, points);
  return group_shells(n, std::move(points));
}

// #{v in Z^dims : |v|^2 <= q}
std::int64_t ball_count(int dims, std::int64_t q) {
  if (q < 0) return 0;
  if (dims == 1) return 2 * isqrt(q) + 1;
  const std::int64_t xmax = isqrt(q);
  std::int64_t total = ball_count(dims - 1, q);
  for (std::int64_t x = 1; x <= xmax; ++x) total += 2 * ball_count(dims - 1, q - x * x);
  return total;
}

}  // namespace

std::vector<LatticeVector> enumerate_shell(const ShellQuery& query) {
  require_supported(query.n, "enumerate_shell");
  if (query.q < 0) throw DomainError("enumerate_shell: q must be >= 0");
  std::vector<LatticeVector> out;
  enumerate_range(query.n, query.q, query.q, out);
  return out;
}

std::int64_t triangle_count(const TriangleCountQuery& query) {
  require_supported(query.n, "triangle_count");
  const auto [n, q1, q2, q3] = query;
  if (q1 < 0 || q2 < 0 || q3 < 0)
    throw DomainError("triangle_count: squared norms must be >= 0");
  const std::int64_t diff = q3 - q1 - q2;
  if (diff % 2 != 0) return 0;
  const std::int64_t target = diff / 2;  // <m, j>
  // Cauchy-Schwarz; also rejects every triangle-bad triple.
  if (static_cast<long double>(target) * target >
      static_cast<long double>(q1) * static_cast<long double>(q2))
    return 0;

  auto a = enumerate_shell({n, q1});
  auto b = enumerate_shell({n, q2});
  if (a.size() > b.size()) std::swap(a, b);
  std::int64_t count = 0;
  for (const auto& m : a)
    for (const auto& j : b)
      if (dot(m, j, n) == target) ++count;
  return count;
}

std::int64_t annulus_count(int n, double r_lo, double r_hi) {
  if (n < 1) throw DomainError("annulus_count: dimension must be >= 1");
  if (!(r_lo >= 0.0) || !(r_hi > r_lo))
    throw DomainError("annulus_count: need 0 <= r_lo < r_hi");
  const std::int64_t q_hi = last_q_below(r_hi);
  const std::int64_t q_lo = first_q_at_least(r_lo);
  if (q_hi < q_lo) return 0;
  return ball_count(n, q_hi) - ball_count(n, q_lo - 1);
}

std::vector<Shell> annulus_shells(int n, double r_lo, double r_hi) {
  require_supported(n, "annulus_shells");
  if (!(r_hi > r_lo)) return {};
  return shells_in_q_range(n, first_q_at_least(r_lo), last_q_below(r_hi));
}

JointSpectralMeasure torus_measure(int n, double cutoff,
                                   TorusMeasureOptions options) {
  if (n != 2 && n != 3)
    throw DomainError("torus_measure: dimension must be 2 or 3");
  if (!(cutoff >= 1.0)) throw DomainError("torus_measure: cutoff must be >= 1");

  const std::int64_t q_max = last_q_at_most(cutoff);
  // Budget check before enumeration: the ball holds about vol(B^n) R^n points.
  const double ball = n == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0;
  const long double points = ball * std::pow(cutoff + 1.0, n);
  const long double pair_work = points * points;
  if (pair_work > static_cast<long double>(options.max_atoms) * 500.0L) {
    std::ostringstream msg;
    msg << "torus_measure: cutoff " << cutoff << " in dimension " << n
        << " needs " << static_cast<double>(pair_work)
        << " lattice pair visits (budget "
        << static_cast<double>(options.max_atoms) * 500.0
        << "); lower the cutoff or use the implicit lattice model";
    throw ResourceError(msg.str());
  }
  const std::vector<Shell> shells = shells_in_q_range(n, 0, q_max);

  const double scale = std::pow(2.0 * std::numbers::pi, -n);
  std::atomic<std::int64_t> total_atoms{0};
  std::vector<std::vector<SpectralAtom>> per_shell(shells.size());

  detail::for_each_chunk(shells.size(), [&](std::size_t i) {
    const Shell& s1 = shells[i];
    auto& out = per_shell[i];
    std::vector<std::int64_t> tally;
    for (const Shell& s2 : shells) {
      // <m, j> ranges over [-bound, bound] with bound = floor(sqrt(q1 q2)).
      const std::int64_t bound = isqrt(s1.q * s2.q);
      tally.assign(static_cast<std::size_t>(2 * bound + 1), 0);
      for (const auto& m : s1.points)
        for (const auto& j : s2.points) ++tally[dot(m, j, n) + bound];
      for (std::int64_t d = -bound; d <= bound; ++d) {
        const std::int64_t c = tally[d + bound];
        if (c == 0) continue;
        const std::int64_t q3 = s1.q + s2.q + 2 * d;
        if (q3 > q_max) continue;
        out.push_back(SpectralAtom{
            {s1.q, s2.q, q3},
            {lattice_frequency(s1.q), lattice_frequency(s2.q), lattice_frequency(q3)},
            c,
            0.0});
      }
    }
    const auto seen = total_atoms.fetch_add(static_cast<std::int64_t>(out.size())) +
                      static_cast<std::int64_t>(out.size());
    if (seen > options.max_atoms) {
      std::ostringstream msg;
      msg << "torus_measure: more than " << options.max_atoms
          << " atoms at cutoff " << cutoff
          << "; raise max_atoms or use the implicit lattice model";
      throw ResourceError(msg.str());
    }
  });

  std::vector<SpectralAtom> atoms;
  atoms.reserve(static_cast<std::size_t>(total_atoms.load()));
  for (auto& chunk : per_shell)
    atoms.insert(atoms.end(), chunk.begin(), chunk.end());
  return JointSpectralMeasure(ManifoldDescriptor::torus(n), cutoff,
                              AtomKeyKind::SquaredNorms, scale, std::move(atoms));
}

TorusLattice::TorusLattice(int n, double cutoff)
    : n_(n),
      cutoff_(cutoff),
      manifold_(ManifoldDescriptor::torus(n)),
      count_scale_(std::pow(2.0 * std::numbers::pi, -n)) {
  if (n != 2 && n != 3) throw DomainError("TorusLattice: dimension must be 2 or 3");
  if (!(cutoff >= 1.0)) throw DomainError("TorusLattice: cutoff must be >= 1");
}

std::int64_t TorusLattice::box_count(const Box& box) const {
  if (box.empty()) return 0;
  for (const auto& side : box.sides) {
    if (side.hi > cutoff_) {
      std::ostringstream msg;
      msg << "box side [" << side.lo << ", " << side.hi
          << ") exceeds the lattice cutoff " << cutoff_;
      throw DomainError(msg.str());
    }
  }
  const auto s1 = annulus_shells(n_, std::max(box.sides[0].lo, 0.0), box.sides[0].hi);
  const auto s2 = annulus_shells(n_, std::max(box.sides[1].lo, 0.0), box.sides[1].hi);
  const std::int64_t q3_lo = first_q_at_least(box.sides[2].lo);
  const std::int64_t q3_hi = last_q_below(box.sides[2].hi);
  std::int64_t count = 0;
  for (const auto& a : s1) {
    for (const auto& b : s2) {
      for (const auto& m : a.points) {
        for (const auto& j : b.points) {
          const std::int64_t q3 = a.q + b.q + 2 * dot(m, j, n_);
          if (q3 >= q3_lo && q3 <= q3_hi) ++count;
        }
      }
    }
  }
  return count;
}

std::int64_t TorusLattice::tail_count(double t1, double t2, double threshold) const {
  const auto s1 = shells_in_q_range(n_, 0, last_q_at_most(t1));
  const auto s2 = shells_in_q_range(n_, 0, last_q_at_most(t2));
  const std::int64_t q3_lo = first_q_at_least(threshold);
  std::int64_t count = 0;
  for (const auto& a : s1)
    for (const auto& b : s2)
      for (const auto& m : a.points)
        for (const auto& j : b.points)
          if (a.q + b.q + 2 * dot(m, j, n_) >= q3_lo) ++count;
  return count;
}

double box_measure(const TorusLattice& lattice, const Box& box) {
  return lattice.count_scale() * static_cast<double>(lattice.box_count(box));
}

double tail_sum(const TorusLattice& lattice, double t1, double t2, double eps) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw DomainError("tail_sum: t1 and t2 must be positive");
  const double threshold = (1.0 + eps) * (t1 + t2);
  const double needed = std::max(threshold, t1 + t2);
  if (needed > lattice.cutoff()) {
    std::ostringstream msg;
    msg << "tail_sum: threshold requires cutoff >= " << needed
        << " but the lattice model stops at " << lattice.cutoff();
    throw DomainError(msg.str());
  }
  return lattice.count_scale() *
         static_cast<double>(lattice.tail_count(t1, t2, threshold));
}

}  // namespace trispec
