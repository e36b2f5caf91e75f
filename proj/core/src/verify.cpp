#include "trispec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "trispec/errors.hpp"

namespace trispec {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

ReportContext context_of(const SpectralModel& model,
                         const SmoothingKernel* kernel) {
  ReportContext ctx;
  ctx.manifold = model_manifold(model);
  ctx.cutoff = model_cutoff(model);
  if (kernel != nullptr) ctx.kernel = kernel->parameters();
  return ctx;
}

std::optional<double> fit_exponent(const std::vector<double>& scales,
                                   const std::vector<ReportRow>& rows) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double r = std::abs(rows[i].measured - rows[i].predicted);
    if (r > 0.0 && scales[i] > 0.0) {
      xs.push_back(std::log(scales[i]));
      ys.push_back(std::log(r));
    }
  }
  if (xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

void require_scales(const std::vector<double>& scales, const char* what) {
  if (scales.empty()) throw DomainError(std::string(what) + ": no scales given");
  for (double s : scales)
    if (!(s > 0.0) || !std::isfinite(s))
      throw DomainError(std::string(what) + ": scales must be positive");
}

ReportRow make_row(const FrequencyTriple& tau, double measured, double predicted) {
  return {tau, measured, predicted, relative_error(measured, predicted)};
}

}  // namespace

const ManifoldDescriptor& model_manifold(const SpectralModel& model) {
  return std::visit([](const auto& m) -> const ManifoldDescriptor& { return m.manifold(); },
                    model);
}

double model_cutoff(const SpectralModel& model) {
  return std::visit([](const auto& m) { return m.cutoff(); }, model);
}

double box_measure(const SpectralModel& model, const Box& box) {
  return std::visit([&](const auto& m) { return box_measure(m, box); }, model);
}

double tail_sum(const SpectralModel& model, double t1, double t2, double eps) {
  return std::visit([&](const auto& m) { return tail_sum(m, t1, t2, eps); }, model);
}

double convolve(const SpectralModel& model, const SmoothingKernel& kernel,
                const FrequencyTriple& tau) {
  return std::visit([&](const auto& m) { return convolve(m, kernel, tau); }, model);
}

double main_term(const ManifoldDescriptor& manifold, const FrequencyTriple& tau) {
  const TriangleClass cls = classify(tau, default_tolerance(tau));
  if (cls.kind != TriangleKind::Good) {
    std::ostringstream msg;
    msg << "main_term: (" << tau.t1 << ", " << tau.t2 << ", " << tau.t3
        << ") is triangle-" << to_string(cls.kind);
    throw DomainError(msg.str());
  }
  const int n = manifold.dim;
  return std::pow(2.0 * std::numbers::pi, -2 * n) * manifold.volume *
         leray_volume(n, tau);
}

double relative_error(double measured, double predicted) noexcept {
  return std::abs(measured - predicted) / std::max(std::abs(predicted), 1e-300);
}

std::string to_string(Verdict v) { return v == Verdict::Pass ? "pass" : "fail"; }

std::string TolerancePolicy::name() const {
  if (kind == Kind::ExactZero) return "exact-zero";
  std::ostringstream s;
  s << "decreasing-rel-error+endpoint<=" << threshold;
  return s.str();
}

Verdict judge(const TolerancePolicy& policy, const std::vector<ReportRow>& rows) {
  if (rows.empty()) return Verdict::Fail;
  if (policy.kind == TolerancePolicy::Kind::ExactZero) {
    for (const auto& r : rows)
      if (r.measured != 0.0) return Verdict::Fail;
    return Verdict::Pass;
  }
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].rel_error < rows[i - 1].rel_error)) return Verdict::Fail;
  return rows.back().rel_error <= policy.threshold ? Verdict::Pass : Verdict::Fail;
}

VerificationReport good_cone_scan(const SpectralModel& model,
                                  const SmoothingKernel& kernel,
                                  const FrequencyTriple& tau0,
                                  const std::vector<double>& scales,
                                  TolerancePolicy policy) {
  require_scales(scales, "good_cone_scan");
  const TriangleClass cls = classify(tau0, default_tolerance(tau0));
  if (cls.kind != TriangleKind::Good)
    throw DomainError("good_cone_scan: tau0 must be triangle-good, got " +
                      to_string(cls.kind));
  const double cutoff = model_cutoff(model);
  const double top = *std::max_element(scales.begin(), scales.end());
  const double reach = top * std::max({tau0.t1, tau0.t2, tau0.t3}) + kernel.trunc_radius();
  if (reach > cutoff) {
    std::ostringstream msg;
    msg << "good_cone_scan: largest dilate needs cutoff >= " << reach << " (have "
        << cutoff << ")";
    throw DomainError(msg.str());
  }

  VerificationReport report;
  report.kind = "good";
  report.context = context_of(model, &kernel);
  report.policy = policy;
  const ManifoldDescriptor& manifold = model_manifold(model);
  for (double s : scales) {
    const FrequencyTriple tau = tau0.scaled(s);
    report.rows.push_back(make_row(tau, convolve(model, kernel, tau), main_term(manifold, tau)));
  }
  report.verdict = judge(policy, report.rows);
  report.remainder_exponent = fit_exponent(scales, report.rows);
  return report;
}

VerificationReport bad_cone_scan(const SpectralModel& model,
                                 const FrequencyTriple& direction,
                                 const std::vector<double>& scales) {
  require_scales(scales, "bad_cone_scan");
  const TriangleClass cls = classify(direction, default_tolerance(direction));
  if (cls.kind != TriangleKind::Bad) {
    std::ostringstream msg;
    msg << "bad_cone_scan: direction (" << direction.t1 << ", " << direction.t2 << ", "
        << direction.t3 << ") is triangle-" << to_string(cls.kind)
        << "; a strictly triangle-bad direction is required";
    throw DomainError(msg.str());
  }
  const double cutoff = model_cutoff(model);
  const double top = *std::max_element(scales.begin(), scales.end());
  const double reach = top * std::max({direction.t1, direction.t2, direction.t3}) + 1.0;
  if (reach > cutoff) {
    std::ostringstream msg;
    msg << "bad_cone_scan: largest box needs cutoff >= " << reach << " (have " << cutoff
        << ")";
    throw DomainError(msg.str());
  }

  VerificationReport report;
  report.kind = "bad";
  report.context = context_of(model, nullptr);
  report.policy = TolerancePolicy::exact_zero();
  for (double s : scales) {
    const FrequencyTriple tau = direction.scaled(s);
    report.rows.push_back(make_row(tau, box_measure(model, Box::unit_at(tau)), 0.0));
  }
  report.verdict = judge(report.policy, report.rows);
  return report;
}

VerificationReport interface_scan(const SpectralModel& model,
                                  const SmoothingKernel& kernel, double t1, double t2,
                                  const std::vector<double>& scales,
                                  TolerancePolicy policy) {
  require_scales(scales, "interface_scan");
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw DomainError("interface_scan: t1 and t2 must be positive");
  const double cutoff = model_cutoff(model);
  const double top = *std::max_element(scales.begin(), scales.end());
  const double reach = top * (t1 + t2) + 2.0 * kernel.trunc_radius();
  if (reach > cutoff) {
    std::ostringstream msg;
    msg << "interface_scan: largest pair needs cutoff >= " << reach << " (have " << cutoff
        << ")";
    throw DomainError(msg.str());
  }

  const ManifoldDescriptor& manifold = model_manifold(model);
  const int n = manifold.dim;
  const double prefactor = std::pow(2.0 * std::numbers::pi, -2 * n) * manifold.volume;

  auto measured_at = [&](double a, double b) {
    return std::visit(
        Overloaded{
            [&](const JointSpectralMeasure& m) {
              long double sum = 0.0L;
              for (const auto& atom : m.atoms()) {
                const double w = kernel.chi(a - atom.freqs.t1);
                if (w == 0.0) continue;
                sum += static_cast<long double>(m.weight(atom)) * w *
                       kernel.chi(b - atom.freqs.t2);
              }
              return static_cast<double>(sum);
            },
            [&](const TorusLattice& lat) {
              return lat.count_scale() * lattice_radial_sum(lat, kernel, a) *
                     lattice_radial_sum(lat, kernel, b);
            }},
        model);
  };

  VerificationReport report;
  report.kind = "interface";
  report.context = context_of(model, &kernel);
  report.policy = policy;
  for (double s : scales) {
    const double a = s * t1;
    const double b = s * t2;
    report.rows.push_back(make_row({a, b, 0.0}, measured_at(a, b),
                                   prefactor * interface_integral(n, a, b)));
  }
  report.verdict = judge(policy, report.rows);
  report.remainder_exponent = fit_exponent(scales, report.rows);
  return report;
}

VerificationReport weyl_check(int n, const std::vector<double>& radii,
                              TolerancePolicy policy) {
  require_scales(radii, "weyl_check");
  const ManifoldDescriptor manifold = ManifoldDescriptor::torus(n);
  const double scale = std::pow(2.0 * std::numbers::pi, -n);

  VerificationReport report;
  report.kind = "weyl";
  report.context.manifold = manifold;
  report.context.cutoff = *std::max_element(radii.begin(), radii.end());
  report.policy = policy;
  for (double r : radii) {
    const double measured = scale * static_cast<double>(annulus_count(n, 0.0, r));
    const double predicted = scale * unit_ball_volume(n) * std::pow(r, n);
    report.rows.push_back(make_row({r, 0.0, 0.0}, measured, predicted));
  }
  report.verdict = judge(policy, report.rows);
  report.remainder_exponent = fit_exponent(radii, report.rows);
  return report;
}

VerificationReport tail_scan(const SpectralModel& model, double t1, double t2, double eps) {
  if (!(eps > 0.0))
    throw DomainError("tail_scan: eps must be > 0 for the vanishing statement");
  VerificationReport report;
  report.kind = "tail";
  report.context = context_of(model, nullptr);
  report.policy = TolerancePolicy::exact_zero();
  const double threshold = (1.0 + eps) * (t1 + t2);
  report.rows.push_back(make_row({t1, t2, threshold}, tail_sum(model, t1, t2, eps), 0.0));
  report.verdict = judge(report.policy, report.rows);
  return report;
}

}  // namespace trispec
