#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "trispec/errors.hpp"
#include "trispec/geometry.hpp"
#include "trispec/lattice.hpp"
#include "trispec/measure_io.hpp"
#include "trispec/report_io.hpp"
#include "trispec/smoothing.hpp"
#include "trispec/sphere.hpp"
#include "trispec/verify.hpp"

namespace trispec::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
    throw DomainError("not a number: '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> parse_list(const std::string& text, std::size_t expect, const char* what) {
  std::vector<double> v;
  for (const auto& p : split(text, ',')) v.push_back(parse_number(p));
  if (v.size() != expect) {
    std::ostringstream msg;
    msg << what << " needs " << expect << " comma-separated values, got '" << text << "'";
    throw DomainError(msg.str());
  }
  return v;
}

FrequencyTriple parse_triple(const std::string& text, const char* what) {
  const auto v = parse_list(text, 3, what);
  return {v[0], v[1], v[2]};
}

std::int64_t parse_count(double v, const char* what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 9e15)
    throw DomainError(std::string(what) + " must be a nonnegative integer");
  return static_cast<std::int64_t>(v);
}

// Either an existing measure file or a model spec: torus2:C, torus3:C, sphere:L.
SpectralModel resolve_model(const std::string& spec) {
  if (std::filesystem::exists(spec)) return load_measure(spec);
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const double value = parse_number(spec.substr(colon + 1));
    if (kind == "torus2") return TorusLattice(2, value);
    if (kind == "torus3") return TorusLattice(3, value);
    if (kind == "sphere") return sphere_measure(parse_count(value, "sphere l_max"));
  }
  throw DomainError("'" + spec +
                    "' is neither a measure file nor a model spec (torus2:C, torus3:C, "
                    "sphere:L)");
}

struct KernelFlags {
  std::optional<double> delta;
  int grid_points = 4096;
  double tail_tol = 1e-12;
};

SmoothingKernel kernel_for(const KernelFlags& f, const SpectralModel& model, ConfigEcho& cfg) {
  const double inj = model_manifold(model).injectivity_radius;
  const double delta = f.delta.value_or(0.9 * inj);
  if (!(delta < inj)) {
    std::ostringstream msg;
    msg << "--delta " << delta << " must be below the injectivity radius " << inj;
    throw DomainError(msg.str());
  }
  cfg.emplace_back("delta", format_double(delta));
  cfg.emplace_back("grid_points", std::to_string(f.grid_points));
  cfg.emplace_back("tail_tolerance", format_double(f.tail_tol));
  return build_kernel(delta, f.grid_points, f.tail_tol);
}

struct OutputFlags {
  std::string path;
  std::string format = "json";
  std::uint64_t seed = 0;
};

int emit(VerificationReport report, const OutputFlags& o, ConfigEcho cfg, std::ostream& out) {
  report.context.seed = o.seed;
  cfg.emplace_back("format", o.format);
  cfg.emplace_back("seed", std::to_string(o.seed));

  std::ostringstream body;
  if (o.format == "json") {
    write_report_json(report, body, cfg);
  } else {
    for (const auto& [k, v] : cfg) body << "# " << k << " = " << v << '\n';
    body << "# verdict = " << to_string(report.verdict) << '\n';
    write_report_csv(report, body);
  }
  if (o.path.empty() || o.path == "-") {
    out << body.str();
  } else {
    std::ofstream file(o.path, std::ios::binary | std::ios::trunc);
    if (!file) throw DomainError("cannot open '" + o.path + "' for writing");
    file << body.str();
    if (!file) throw DomainError("failed writing '" + o.path + "'");
    out << report.kind << " scan: " << report.rows.size() << " rows, verdict "
        << to_string(report.verdict) << " -> " << o.path << '\n';
  }
  return report.verdict == Verdict::Pass ? kExitPass : kExitFail;
}

}  // namespace

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      values.push_back(parse_number(item));
      continue;
    }
    std::string hi_text = item.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = hi_text.find(':'); colon != std::string::npos) {
      step = parse_number(hi_text.substr(colon + 1));
      hi_text = hi_text.substr(0, colon);
    }
    const double lo = parse_number(item.substr(0, dots));
    const double hi = parse_number(hi_text);
    if (!(step > 0.0) || hi < lo) throw DomainError("bad range '" + item + "'");
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    if (count > 1'000'000) throw DomainError("range '" + item + "' is too long");
    for (std::int64_t i = 0; i <= count; ++i) values.push_back(lo + static_cast<double>(i) * step);
  }
  if (values.empty()) throw DomainError("empty schedule");
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trispec: joint spectral measures of eigenfunction triple products"};
  app.name("trispec");
  app.require_subcommand(1);

  // leray
  auto* leray = app.add_subcommand("leray", "closed-form Leray volume, optional Monte Carlo check");
  leray->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  int leray_n = 2;
  std::string leray_tau;
  double oracle_samples = 0.0;
  std::optional<double> shell_width;
  std::uint64_t leray_seed = 1;
  leray->add_option("-n,--dim", leray_n, "dimension n >= 2")->capture_default_str();
  leray->add_option("--tau", leray_tau, "t1,t2,t3")->required();
  leray->add_option("--oracle", oracle_samples, "Monte Carlo samples (e.g. 1e7)");
  leray->add_option("--h", shell_width, "oracle shell width (default margin/20)");
  leray->add_option("--seed", leray_seed, "oracle seed")->capture_default_str();

  // count
  auto* count = app.add_subcommand("count", "exact lattice triangle count");
  int count_n = 2;
  std::string count_q;
  count->add_option("-n,--dim", count_n, "dimension (2, 3 or 4)")->capture_default_str();
  count->add_option("-q", count_q, "q1,q2,q3 squared norms")->required();

  // measure
  auto* measure = app.add_subcommand("measure", "write a joint spectral measure document");
  std::string model_name;
  std::optional<double> cutoff;
  std::optional<std::int64_t> l_max;
  std::string measure_out;
  measure->add_option("--model", model_name, "torus2, torus3 or sphere")
      ->required()
      ->check(CLI::IsMember({"torus2", "torus3", "sphere"}));
  measure->add_option("--cutoff", cutoff, "frequency cutoff (torus)");
  measure->add_option("--lmax", l_max, "maximum degree (sphere)");
  measure->add_option("-o,--output", measure_out, "output path (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "run a verification scan");
  scan->require_subcommand(1);
  OutputFlags output;
  KernelFlags kflags;
  std::string model_spec, tau0, dir, pair, scales_text, radii_text;
  std::optional<double> threshold;
  double eps = 0.0;
  int weyl_n = 2;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", output.path, "report path (default stdout)");
    sub->add_option("--format", output.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--seed", output.seed, "recorded in the report")->capture_default_str();
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("-m,--measure", model_spec,
                    "measure file, or model spec torus2:C / torus3:C / sphere:L")
        ->required();
  };
  auto add_kernel = [&](CLI::App* sub) {
    sub->add_option("--delta", kflags.delta, "kernel Fourier support (default 0.9 inj M)");
    sub->add_option("--grid-points", kflags.grid_points, "kernel quadrature points")
        ->capture_default_str();
    sub->add_option("--tail-tol", kflags.tail_tol, "kernel tail mass tolerance")
        ->capture_default_str();
  };

  auto* good = scan->add_subcommand("good", "smoothed measure vs main term along s*tau0");
  add_model(good);
  good->add_option("--tau0", tau0, "t1,t2,t3")->required();
  good->add_option("--scales", scales_text, "e.g. 8,16,32 or 2..40")->required();
  good->add_option("--threshold", threshold, "endpoint rel_error bound (default 0.15)");
  add_kernel(good);
  add_output(good);

  auto* bad = scan->add_subcommand("bad", "unit boxes along a triangle-bad direction");
  add_model(bad);
  bad->add_option("--dir", dir, "t1,t2,t3")->required();
  bad->add_option("--scales", scales_text, "e.g. 2..40")->required();
  add_output(bad);

  auto* iface = scan->add_subcommand("interface", "integrated third slot vs interface identity");
  add_model(iface);
  iface->add_option("--t", pair, "t1,t2")->required();
  iface->add_option("--scales", scales_text, "dilations of (t1, t2)")->default_val("1");
  iface->add_option("--threshold", threshold, "endpoint rel_error bound (default 0.15)");
  add_kernel(iface);
  add_output(iface);

  auto* weyl = scan->add_subcommand("weyl", "lattice ball counts vs volume on the torus");
  weyl->add_option("-n,--dim", weyl_n, "torus dimension")->capture_default_str();
  weyl->add_option("--radii", radii_text, "e.g. 50,100,200")->required();
  weyl->add_option("--threshold", threshold, "endpoint rel_error bound (default 0.02)");
  add_output(weyl);

  auto* tail = scan->add_subcommand("tail", "mass beyond (1+eps)(t1+t2) in the third slot");
  add_model(tail);
  tail->add_option("--t", pair, "t1,t2")->required();
  tail->add_option("--eps", eps, "eps > 0")->required();
  add_output(tail);

  std::vector<std::string> storage{"trispec"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (leray->parsed()) {
      const FrequencyTriple t = parse_triple(leray_tau, "--tau");
      const TriangleClass cls = classify(t, default_tolerance(t));
      if (cls.kind != TriangleKind::Good) {
        err << "error: tau (" << leray_tau << ") is triangle-" << to_string(cls.kind)
            << "; the Leray volume needs a nondegenerate triangle\n";
        return kExitUsage;
      }
      const double exact = leray_volume(leray_n, t);
      out << format_double(exact) << '\n';
      if (oracle_samples > 0.0) {
        const auto samples = parse_count(oracle_samples, "--oracle");
        const double h = shell_width.value_or(classify(t, 0.0).margin / 20.0);
        const auto est = leray_volume_oracle(leray_n, t, h, samples, leray_seed);
        const double sigma = std::abs(est.estimate - exact) / est.std_error;
        out << "oracle " << format_double(est.estimate) << " +- "
            << format_double(est.std_error) << " (samples " << samples << ", h "
            << format_double(h) << ", seed " << leray_seed << ")\n";
        out << "deviation " << format_double(sigma) << " SE: "
            << (sigma <= 3.0 ? "agree" : "disagree") << '\n';
        return sigma <= 3.0 ? kExitPass : kExitFail;
      }
      return kExitPass;
    }

    if (count->parsed()) {
      const auto q = parse_list(count_q, 3, "-q");
      out << triangle_count({count_n, parse_count(q[0], "q1"), parse_count(q[1], "q2"),
                             parse_count(q[2], "q3")})
          << '\n';
      return kExitPass;
    }

    if (measure->parsed()) {
      std::optional<JointSpectralMeasure> m;
      if (model_name == "sphere") {
        if (!l_max || cutoff) throw DomainError("--model sphere takes --lmax (and no --cutoff)");
        m = sphere_measure(*l_max);
      } else {
        if (!cutoff || l_max) throw DomainError("--model " + model_name + " takes --cutoff");
        m = torus_measure(model_name == "torus2" ? 2 : 3, *cutoff);
      }
      if (measure_out.empty() || measure_out == "-") {
        write_measure_json(*m, out);
      } else {
        save_measure(*m, measure_out);
        out << "wrote " << m->atoms().size() << " atoms to " << measure_out << '\n';
      }
      return kExitPass;
    }

    ConfigEcho cfg;
    if (good->parsed()) {
      cfg = {{"command", "scan good"}, {"measure", model_spec}, {"tau0", tau0},
             {"scales", scales_text}};
      const SpectralModel model = resolve_model(model_spec);
      const auto kernel = kernel_for(kflags, model, cfg);
      const auto policy = TolerancePolicy::trend(threshold.value_or(0.15));
      cfg.emplace_back("policy", policy.name());
      return emit(good_cone_scan(model, kernel, parse_triple(tau0, "--tau0"),
                                 parse_schedule(scales_text), policy),
                  output, cfg, out);
    }
    if (bad->parsed()) {
      cfg = {{"command", "scan bad"}, {"measure", model_spec}, {"dir", dir},
             {"scales", scales_text}, {"policy", TolerancePolicy::exact_zero().name()}};
      const SpectralModel model = resolve_model(model_spec);
      return emit(bad_cone_scan(model, parse_triple(dir, "--dir"), parse_schedule(scales_text)),
                  output, cfg, out);
    }
    if (iface->parsed()) {
      cfg = {{"command", "scan interface"}, {"measure", model_spec}, {"t", pair},
             {"scales", scales_text}};
      const auto t = parse_list(pair, 2, "--t");
      const SpectralModel model = resolve_model(model_spec);
      const auto kernel = kernel_for(kflags, model, cfg);
      const auto policy = TolerancePolicy::trend(threshold.value_or(0.15));
      cfg.emplace_back("policy", policy.name());
      return emit(interface_scan(model, kernel, t[0], t[1], parse_schedule(scales_text), policy),
                  output, cfg, out);
    }
    if (weyl->parsed()) {
      const auto policy = TolerancePolicy::trend(threshold.value_or(0.02));
      cfg = {{"command", "scan weyl"}, {"n", std::to_string(weyl_n)}, {"radii", radii_text},
             {"policy", policy.name()}};
      return emit(weyl_check(weyl_n, parse_schedule(radii_text), policy), output, cfg, out);
    }
    if (tail->parsed()) {
      cfg = {{"command", "scan tail"}, {"measure", model_spec}, {"t", pair},
             {"eps", format_double(eps)}, {"policy", TolerancePolicy::exact_zero().name()}};
      const auto t = parse_list(pair, 2, "--t");
      const SpectralModel model = resolve_model(model_spec);
      return emit(tail_scan(model, t[0], t[1], eps), output, cfg, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace trispec::cli
