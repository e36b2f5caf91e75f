#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "trispec/errors.hpp"
#include "trispec/lattice.hpp"
#include "trispec/smoothing.hpp"
#include "trispec/sphere.hpp"
#include "trispec/verify.hpp"

using namespace trispec;

namespace {

constexpr double kPi = std::numbers::pi;
const double kDelta = 0.9 * kPi;

const SmoothingKernel& kernel_1e4() {
  static const SmoothingKernel k = build_kernel(kDelta, 4096, 1e-4);
  return k;
}

ReportRow row(double rel) { return {{1, 1, 1}, 0.0, 1.0, rel}; }

}  // namespace

TEST(MainTerm, Examples) {
  EXPECT_NEAR(main_term(ManifoldDescriptor::torus(2), {3, 4, 5}), 5.0 / kPi, 1e-14);
  EXPECT_NEAR(main_term(ManifoldDescriptor::sphere2(), {3, 4, 5}), 5.0 / (kPi * kPi), 1e-14);
  EXPECT_THROW((void)main_term(ManifoldDescriptor::torus(2), {1, 1, 3}), DomainError);
  EXPECT_THROW((void)main_term(ManifoldDescriptor::torus(2), {1, 2, 3}), DomainError);
}

TEST(MainTerm, Homogeneity) {
  for (int n : {2, 3}) {
    const auto m = ManifoldDescriptor::torus(n);
    const FrequencyTriple t{2, 3, 4};
    for (double s : {0.5, 7.0})
      EXPECT_NEAR(main_term(m, t.scaled(s)) / main_term(m, t), std::pow(s, 2 * n - 3), 1e-12);
  }
}

TEST(Judge, Policies) {
  const auto trend = TolerancePolicy::trend(0.15);
  EXPECT_EQ(judge(trend, {row(0.3), row(0.2), row(0.1)}), Verdict::Pass);
  EXPECT_EQ(judge(trend, {row(0.3), row(0.2), row(0.2)}), Verdict::Fail);
  EXPECT_EQ(judge(trend, {row(0.3), row(0.2)}), Verdict::Fail);
  EXPECT_EQ(judge(trend, {}), Verdict::Fail);
  std::vector<ReportRow> zeros(3, ReportRow{{1, 1, 3}, 0.0, 0.0, 0.0});
  EXPECT_EQ(judge(TolerancePolicy::exact_zero(), zeros), Verdict::Pass);
  zeros[1].measured = 1e-300;
  EXPECT_EQ(judge(TolerancePolicy::exact_zero(), zeros), Verdict::Fail);
  EXPECT_DOUBLE_EQ(relative_error(1.0, 0.0), 1e300);
  EXPECT_NEAR(relative_error(1.1, 1.0), 0.1, 1e-15);
}

TEST(GoodConeScan, SyntheticContinuumMeasure) {
  // Atoms on a unit grid carrying the main-term density; the smoothed value
  // must reproduce the main term up to the kernel's second-moment blur.
  const auto& k = kernel_1e4();
  const auto torus = ManifoldDescriptor::torus(2);
  const FrequencyTriple tau{120, 160, 200};
  const int r = static_cast<int>(std::ceil(k.trunc_radius())) + 1;
  std::vector<SpectralAtom> atoms;
  std::int64_t id = 0;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b)
      for (int c = -r; c <= r; ++c) {
        SpectralAtom at;
        at.key = {id++, 0, 0};
        at.freqs = {tau.t1 + a, tau.t2 + b, tau.t3 + c};
        at.weight = main_term(torus, at.freqs);
        atoms.push_back(at);
      }
  const SpectralModel model =
      JointSpectralMeasure(torus, 1000.0, AtomKeyKind::Degrees, 0.0, std::move(atoms));
  const auto rep = good_cone_scan(model, k, {3, 4, 5}, {40.0});
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_LE(rep.rows[0].rel_error, 1e-3);
}

TEST(GoodConeScan, TorusTrendAndSafety) {
  const auto k = build_kernel(kDelta, 4096, 1e-6);
  const SpectralModel model = TorusLattice(2, 200.0);
  const auto rep = good_cone_scan(model, k, {3, 4, 5}, {8, 16, 32});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  EXPECT_LT(rep.rows[2].rel_error, 0.15);
  ASSERT_TRUE(rep.remainder_exponent.has_value());
  for (const auto& r : rep.rows) {
    EXPECT_GE(r.measured, 0.0);
    EXPECT_GT(r.predicted, 0.0);
  }
  ASSERT_TRUE(rep.context.kernel.has_value());
  EXPECT_EQ(rep.context.kernel->trunc_radius, k.trunc_radius());

  EXPECT_THROW((void)good_cone_scan(model, k, {3, 4, 5}, {60}), DomainError);
  EXPECT_THROW((void)good_cone_scan(model, k, {1, 1, 3}, {8}), DomainError);
  EXPECT_THROW((void)good_cone_scan(model, k, {3, 4, 5}, {}), DomainError);
  EXPECT_THROW((void)good_cone_scan(model, k, {3, 4, 5}, {-1}), DomainError);
}

TEST(GoodConeScan, KernelQuadratureRobustness) {
  // Refining the kernel's quadrature grid moves smoothed values by no more
  // than the truncated tails plus the quadrature tolerance.
  const auto coarse = build_kernel(kDelta, 2048, 1e-6);
  const auto fine = build_kernel(kDelta, 8192, 1e-6);
  const SpectralModel model = TorusLattice(2, 120.0);
  const auto a = good_cone_scan(model, coarse, {3, 4, 5}, {8, 16});
  const auto b = good_cone_scan(model, fine, {3, 4, 5}, {8, 16});
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double mass = a.rows[i].measured;
    const double bound = (coarse.tail_bound() + fine.tail_bound()) * 3.0 * mass + 1e-7 * mass;
    EXPECT_LE(std::abs(a.rows[i].measured - b.rows[i].measured), bound);
  }
}

TEST(BadConeScan, TorusZeros) {
  const SpectralModel model = TorusLattice(2, 125.0);
  std::vector<double> scales;
  for (int s = 2; s <= 40; ++s) scales.push_back(s);
  const auto rep = bad_cone_scan(model, {1, 1, 3}, scales);
  EXPECT_EQ(rep.rows.size(), scales.size());
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  EXPECT_EQ(rep.policy.kind, TolerancePolicy::Kind::ExactZero);
  for (const auto& r : rep.rows) EXPECT_EQ(r.measured, 0.0);
}

TEST(BadConeScan, SphereZeros) {
  const SpectralModel model = sphere_measure(60);
  std::vector<double> scales;
  for (int s = 2; s <= 19; ++s) scales.push_back(s);
  const auto rep = bad_cone_scan(model, {1, 1, 3}, scales);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
}

TEST(BadConeScan, RejectsBoundaryAndGoodDirections) {
  const SpectralModel model = TorusLattice(2, 125.0);
  EXPECT_THROW((void)bad_cone_scan(model, {1, 1, 2}, {2}), DomainError);
  EXPECT_THROW((void)bad_cone_scan(model, {3, 4, 5}, {2}), DomainError);
  EXPECT_THROW((void)bad_cone_scan(model, {1, 1, 3}, {50}), DomainError);
}

TEST(InterfaceScan, SeparableFormOnBothModels) {
  const auto& k = kernel_1e4();
  const double cutoff = 40.0;
  const double top = std::floor((cutoff - 2.0 * k.trunc_radius()) / 2.0);
  ASSERT_GE(top, 4.0);
  const auto materialized = torus_measure(2, cutoff);
  const SpectralModel a = materialized;
  const SpectralModel b = TorusLattice(2, cutoff);
  const std::vector<double> scales{top / 2.0, top};
  const auto ra = interface_scan(a, k, 1.0, 1.0, scales);
  const auto rb = interface_scan(b, k, 1.0, 1.0, scales);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double s = scales[i];
    // explicit double sum over shells
    long double sa = 0.0L;
    for (const auto& sh : annulus_shells(2, 0.0, s + k.trunc_radius() + 1.0))
      sa += sh.points.size() * k.chi(s - lattice_frequency(sh.q));
    const double direct = static_cast<double>(sa * sa) / std::pow(2.0 * kPi, 2);
    EXPECT_NEAR(ra.rows[i].measured / direct, 1.0, 1e-12);
    EXPECT_NEAR(rb.rows[i].measured / direct, 1.0, 1e-12);
  }
}

TEST(InterfaceScan, PredictionAndTrend) {
  const auto k = build_kernel(kDelta);
  const SpectralModel model = TorusLattice(2, 80.0 * 2.0 + 2.0 * k.trunc_radius() + 1.0);
  const auto rep = interface_scan(model, k, 1.0, 1.0, {40.0, 80.0});
  EXPECT_NEAR(rep.rows[0].predicted, 1600.0, 1e-6);
  EXPECT_LT(rep.rows[1].rel_error, rep.rows[0].rel_error);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  EXPECT_THROW((void)interface_scan(model, k, 1.0, 1.0, {200.0}), DomainError);
}

TEST(WeylCheck, CountsAndTrend) {
  const auto tiny = weyl_check(2, {0.5});
  EXPECT_DOUBLE_EQ(tiny.rows[0].measured, 1.0 / std::pow(2.0 * kPi, 2));
  const auto rep = weyl_check(2, {50, 100, 200, 400});
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  EXPECT_LE(rep.rows[2].rel_error, 0.02);
  const auto three = weyl_check(3, {10, 20, 40});
  EXPECT_EQ(three.verdict, Verdict::Pass);
}

TEST(TailScan, CorollaryInstance) {
  const SpectralModel model = TorusLattice(2, 22.0);
  const auto rep = tail_scan(model, 10, 10, 0.1);
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  EXPECT_EQ(rep.rows[0].measured, 0.0);
  EXPECT_THROW((void)tail_scan(model, 10, 10, 0.0), DomainError);
  EXPECT_THROW((void)tail_scan(model, 10, 10, 0.2), DomainError);
}
