#include "trispec/report_io.hpp"

#include <ostream>

#include "json.hpp"
#include "trispec/measure_io.hpp"

namespace trispec {

namespace {

using Json = nlohmann::ordered_json;

Json manifold_json(const ManifoldDescriptor& m) {
  return Json{{"model", m.model == ManifoldModel::Torus ? "torus" : "sphere2"},
              {"dim", m.dim},
              {"volume", m.volume},
              {"injectivity_radius", m.injectivity_radius}};
}

}  // namespace

void write_report_json(const VerificationReport& report, std::ostream& out,
                       const ConfigEcho& config) {
  Json doc;
  doc["format"] = "trispec.verification_report";
  doc["version"] = 1;
  doc["kind"] = report.kind;

  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  doc["config"] = cfg;

  Json ctx;
  ctx["manifold"] = manifold_json(report.context.manifold);
  ctx["cutoff"] = report.context.cutoff;
  if (report.context.kernel) {
    const KernelParameters& k = *report.context.kernel;
    ctx["kernel"] = Json{{"delta", k.delta},
                         {"grid_points", k.grid_points},
                         {"tail_tolerance", k.tail_tolerance},
                         {"trunc_radius", k.trunc_radius},
                         {"tail_bound", k.tail_bound}};
  } else {
    ctx["kernel"] = nullptr;
  }
  ctx["seed"] = report.context.seed;
  doc["context"] = ctx;

  doc["policy"] = Json{{"name", report.policy.name()},
                       {"threshold", report.policy.threshold}};

  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"tau", Json::array({r.tau.t1, r.tau.t2, r.tau.t3})},
                        {"measured", r.measured},
                        {"predicted", r.predicted},
                        {"rel_error", r.rel_error}});
  }
  doc["rows"] = rows;
  if (report.remainder_exponent) {
    doc["remainder_exponent"] = *report.remainder_exponent;
  } else {
    doc["remainder_exponent"] = nullptr;
  }
  doc["verdict"] = to_string(report.verdict);
  out << doc.dump(2) << '\n';
}

void write_report_csv(const VerificationReport& report, std::ostream& out) {
  out << "tau1,tau2,tau3,measured,predicted,rel_error\n";
  for (const auto& r : report.rows) {
    out << format_double(r.tau.t1) << ',' << format_double(r.tau.t2) << ','
        << format_double(r.tau.t3) << ',' << format_double(r.measured) << ','
        << format_double(r.predicted) << ',' << format_double(r.rel_error) << '\n';
  }
}

}  // namespace trispec
