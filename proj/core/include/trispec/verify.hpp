#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trispec/geometry.hpp"
#include "trispec/lattice.hpp"
#include "trispec/measure.hpp"
#include "trispec/smoothing.hpp"

namespace trispec {

/// Either a materialized measure or the implicit torus lattice.
using SpectralModel = std::variant<JointSpectralMeasure, TorusLattice>;

[[nodiscard]] const ManifoldDescriptor& model_manifold(const SpectralModel& model);
[[nodiscard]] double model_cutoff(const SpectralModel& model);
[[nodiscard]] double box_measure(const SpectralModel& model, const Box& box);
[[nodiscard]] double tail_sum(const SpectralModel& model, double t1, double t2, double eps);
[[nodiscard]] double convolve(const SpectralModel& model, const SmoothingKernel& kernel,
                              const FrequencyTriple& tau);

/// (2pi)^{-2n} vol M vol F^{-1}(tau). Throws DomainError unless tau is
/// triangle-good.
[[nodiscard]] double main_term(const ManifoldDescriptor& manifold,
                               const FrequencyTriple& tau);

/// |measured - predicted| / max(|predicted|, 1e-300)
[[nodiscard]] double relative_error(double measured, double predicted) noexcept;

enum class Verdict { Pass, Fail };

[[nodiscard]] std::string to_string(Verdict v);

/// How a report's rows are judged.
struct TolerancePolicy {
  enum class Kind {
    ExactZero,      ///< every measured value must be exactly 0
    TrendEndpoint,  ///< rel_error strictly decreasing, last row <= threshold
  };
  Kind kind = Kind::TrendEndpoint;
  double threshold = 0.15;

  [[nodiscard]] std::string name() const;
  static TolerancePolicy exact_zero() { return {Kind::ExactZero, 0.0}; }
  static TolerancePolicy trend(double threshold) { return {Kind::TrendEndpoint, threshold}; }
};

struct ReportRow {
  FrequencyTriple tau;
  double measured = 0.0;
  double predicted = 0.0;
  double rel_error = 0.0;
};

struct ReportContext {
  ManifoldDescriptor manifold;
  double cutoff = 0.0;
  std::optional<KernelParameters> kernel;
  std::uint64_t seed = 0;
};

struct VerificationReport {
  std::string kind;  ///< good, bad, interface, weyl, tail
  ReportContext context;
  TolerancePolicy policy;
  std::vector<ReportRow> rows;
  Verdict verdict = Verdict::Fail;
  /// Least-squares slope of log|measured - predicted| against log of the
  /// scale parameter, when at least two rows have a nonzero remainder.
  std::optional<double> remainder_exponent;
};

/// Applies `policy` to the rows.
[[nodiscard]] Verdict judge(const TolerancePolicy& policy,
                            const std::vector<ReportRow>& rows);

/// Smoothed measure against the main term along the dilates s * tau0.
[[nodiscard]] VerificationReport good_cone_scan(
    const SpectralModel& model, const SmoothingKernel& kernel,
    const FrequencyTriple& tau0, const std::vector<double>& scales,
    TolerancePolicy policy = TolerancePolicy::trend(0.15));

/// Unit-box masses mu(s * direction + [0,1)^3) for a triangle-bad direction;
/// all must vanish exactly.
[[nodiscard]] VerificationReport bad_cone_scan(const SpectralModel& model,
                                               const FrequencyTriple& direction,
                                               const std::vector<double>& scales);

/// Integral over tau3 of rho * mu at s * (t1, t2) against
/// (2pi)^{-2n} vol M interface_integral(n, s t1, s t2). Rows carry
/// tau = (s t1, s t2, 0).
[[nodiscard]] VerificationReport interface_scan(
    const SpectralModel& model, const SmoothingKernel& kernel, double t1, double t2,
    const std::vector<double>& scales,
    TolerancePolicy policy = TolerancePolicy::trend(0.15));

/// (2pi)^{-n} #{|m| < R} against (2pi)^{-n} vol(B^n) R^n on the torus.
/// Rows carry tau = (R, 0, 0).
[[nodiscard]] VerificationReport weyl_check(int n, const std::vector<double>& radii,
                                            TolerancePolicy policy = TolerancePolicy::trend(0.02));

/// Tail mass beyond (1+eps)(t1+t2) for eps > 0; must vanish exactly.
[[nodiscard]] VerificationReport tail_scan(const SpectralModel& model, double t1,
                                           double t2, double eps);

}  // namespace trispec
