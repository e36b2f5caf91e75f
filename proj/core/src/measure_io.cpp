#include "trispec/measure_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <variant>

#include "json.hpp"
#include "trispec/errors.hpp"

namespace trispec {

namespace {

constexpr const char* kFormatName = "trispec.joint_spectral_measure";

using Scalar = std::variant<std::monostate, std::int64_t, double, std::string>;

double as_double(const Scalar& s, const std::string& what) {
  if (const auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&s)) return *d;
  throw DomainError("measure document: field '" + what + "' must be a number");
}

std::int64_t as_int(const Scalar& s, const std::string& what) {
  if (const auto* i = std::get_if<std::int64_t>(&s)) return *i;
  throw DomainError("measure document: field '" + what + "' must be an integer");
}

std::string as_string(const Scalar& s, const std::string& what) {
  if (const auto* str = std::get_if<std::string>(&s)) return *str;
  throw DomainError("measure document: field '" + what + "' must be a string");
}

struct AtomRecord {
  std::array<std::int64_t, 3> key{-1, -1, -1};
  int lattice_keys = 0;  // q1..q3 seen
  int degree_keys = 0;   // l1..l3 seen
  std::optional<std::int64_t> count;
  std::optional<double> weight;
};

// Streams atoms straight into compact records instead of building a DOM;
// measures can hold millions of atoms.
class MeasureSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  std::map<std::string, Scalar> top;
  std::map<std::string, Scalar> manifold;
  std::vector<AtomRecord> atoms;
  bool saw_atoms = false;

  bool null() override { return store(Scalar{}); }
  bool boolean(bool) override { return fail("booleans are not part of the schema"); }
  bool number_integer(number_integer_t v) override { return store(std::int64_t{v}); }
  bool number_unsigned(number_unsigned_t v) override {
    return store(static_cast<std::int64_t>(v));
  }
  bool number_float(number_float_t v, const string_t&) override { return store(double{v}); }
  bool string(string_t& v) override { return store(v); }
  bool binary(binary_t&) override { return fail("binary values are not supported"); }

  bool start_object(std::size_t) override {
    ++depth_;
    if (depth_ == 1) return true;
    if (depth_ == 2 && key_ == "manifold") return true;
    if (depth_ == 3 && in_atoms_) {
      atoms.emplace_back();
      return true;
    }
    return skip_or_fail();
  }
  bool end_object() override {
    --depth_;
    return true;
  }
  bool start_array(std::size_t) override {
    ++depth_;
    if (depth_ == 2 && key_ == "atoms") {
      in_atoms_ = true;
      saw_atoms = true;
      return true;
    }
    return skip_or_fail();
  }
  bool end_array() override {
    --depth_;
    if (depth_ == 1) in_atoms_ = false;
    return true;
  }
  bool key(string_t& k) override {
    if (depth_ <= 1) key_ = k;
    inner_key_ = k;
    return true;
  }
  bool parse_error(std::size_t pos, const std::string&,
                   const nlohmann::detail::exception& e) override {
    error = "malformed JSON at byte " + std::to_string(pos) + ": " + e.what();
    return false;
  }

  std::string error;

 private:
  bool store(Scalar v) {
    if (depth_ == 1) {
      top[key_] = std::move(v);
    } else if (depth_ == 2 && key_ == "manifold") {
      manifold[inner_key_] = std::move(v);
    } else if (depth_ == 3 && in_atoms_ && !atoms.empty()) {
      return store_atom_field(atoms.back(), v);
    } else {
      return fail("unexpected value under '" + key_ + "'");
    }
    return true;
  }
  bool store_atom_field(AtomRecord& a, const Scalar& v) {
    const std::string& k = inner_key_;
    if (k.size() == 2 && (k[0] == 'q' || k[0] == 'l') && k[1] >= '1' && k[1] <= '3') {
      const auto* i = std::get_if<std::int64_t>(&v);
      if (i == nullptr) return fail("atom key '" + k + "' must be an integer");
      a.key[k[1] - '1'] = *i;
      (k[0] == 'q' ? a.lattice_keys : a.degree_keys) += 1;
      return true;
    }
    if (k == "count") {
      const auto* i = std::get_if<std::int64_t>(&v);
      if (i == nullptr) return fail("atom count must be an integer");
      a.count = *i;
      return true;
    }
    if (k == "weight") {
      if (const auto* d = std::get_if<double>(&v)) {
        a.weight = *d;
      } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
        a.weight = static_cast<double>(*i);
      } else {
        return fail("atom weight must be a number");
      }
      return true;
    }
    return fail("unknown atom field '" + k + "'");
  }
  bool skip_or_fail() { return fail("unexpected nesting under '" + key_ + "'"); }
  bool fail(const std::string& why) {
    error = why;
    return false;
  }

  int depth_ = 0;
  bool in_atoms_ = false;
  std::string key_;
  std::string inner_key_;
};

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_measure_json(const JointSpectralMeasure& measure, std::ostream& out) {
  const ManifoldDescriptor& m = measure.manifold();
  const bool torus = measure.integer_counts();
  out << "{\n";
  out << "  \"format\": \"" << kFormatName << "\",\n";
  out << "  \"version\": " << kMeasureFormatVersion << ",\n";
  out << "  \"manifold\": {\"model\": \""
      << (m.model == ManifoldModel::Torus ? "torus" : "sphere2") << "\", \"dim\": " << m.dim
      << ", \"volume\": " << format_double(m.volume)
      << ", \"injectivity_radius\": " << format_double(m.injectivity_radius) << "},\n";
  out << "  \"cutoff\": " << format_double(measure.cutoff()) << ",\n";
  out << "  \"key_kind\": \"" << (torus ? "squared_norms" : "degrees") << "\",\n";
  out << "  \"count_scale\": " << format_double(measure.count_scale()) << ",\n";
  out << "  \"atoms\": [";
  bool first = true;
  for (const auto& a : measure.atoms()) {
    out << (first ? "\n    " : ",\n    ");
    first = false;
    if (torus) {
      out << "{\"q1\": " << a.key[0] << ", \"q2\": " << a.key[1] << ", \"q3\": " << a.key[2]
          << ", \"count\": " << a.count << "}";
    } else {
      out << "{\"l1\": " << a.key[0] << ", \"l2\": " << a.key[1] << ", \"l3\": " << a.key[2]
          << ", \"weight\": " << format_double(a.weight) << "}";
    }
  }
  out << (first ? "]\n" : "\n  ]\n");
  out << "}\n";
}

JointSpectralMeasure read_measure_json(std::istream& in) {
  MeasureSax sax;
  const bool ok = nlohmann::json::sax_parse(in, &sax);
  if (!ok) throw DomainError("measure document: " + sax.error);

  auto field = [&](const std::map<std::string, Scalar>& obj, const std::string& k) {
    auto it = obj.find(k);
    if (it == obj.end()) throw DomainError("measure document: missing field '" + k + "'");
    return it->second;
  };

  if (as_string(field(sax.top, "format"), "format") != kFormatName)
    throw DomainError("measure document: unknown format tag");
  const auto version = as_int(field(sax.top, "version"), "version");
  if (version != kMeasureFormatVersion)
    throw DomainError("measure document: unsupported version " + std::to_string(version));
  if (!sax.saw_atoms) throw DomainError("measure document: missing field 'atoms'");

  const std::string model = as_string(field(sax.manifold, "model"), "manifold.model");
  const auto dim = static_cast<int>(as_int(field(sax.manifold, "dim"), "manifold.dim"));
  ManifoldDescriptor manifold;
  if (model == "torus") {
    manifold = ManifoldDescriptor::torus(dim);
  } else if (model == "sphere2") {
    if (dim != 2) throw DomainError("measure document: sphere2 must have dim 2");
    manifold = ManifoldDescriptor::sphere2();
  } else {
    throw DomainError("measure document: unknown manifold model '" + model + "'");
  }

  const double cutoff = as_double(field(sax.top, "cutoff"), "cutoff");
  const std::string kind = as_string(field(sax.top, "key_kind"), "key_kind");
  const bool torus = kind == "squared_norms";
  if (!torus && kind != "degrees")
    throw DomainError("measure document: unknown key_kind '" + kind + "'");
  if (torus != (manifold.model == ManifoldModel::Torus))
    throw DomainError("measure document: key_kind does not match the manifold");

  std::vector<SpectralAtom> atoms;
  atoms.reserve(sax.atoms.size());
  for (const auto& rec : sax.atoms) {
    SpectralAtom a;
    a.key = rec.key;
    for (auto k : a.key)
      if (k < 0) throw DomainError("measure document: missing or negative atom key");
    if (torus) {
      if (rec.lattice_keys != 3 || rec.degree_keys != 0 || !rec.count)
        throw DomainError("measure document: torus atoms need q1, q2, q3 and count");
      a.count = *rec.count;
      a.freqs = {lattice_frequency(a.key[0]), lattice_frequency(a.key[1]),
                 lattice_frequency(a.key[2])};
    } else {
      if (rec.degree_keys != 3 || rec.lattice_keys != 0 || !rec.weight)
        throw DomainError("measure document: sphere atoms need l1, l2, l3 and weight");
      a.weight = *rec.weight;
      a.freqs = {degree_frequency(a.key[0]), degree_frequency(a.key[1]),
                 degree_frequency(a.key[2])};
    }
    atoms.push_back(a);
  }
  const double scale = torus ? std::pow(2.0 * std::numbers::pi, -dim) : 0.0;
  return JointSpectralMeasure(manifold, cutoff,
                              torus ? AtomKeyKind::SquaredNorms : AtomKeyKind::Degrees,
                              scale, std::move(atoms));
}

void save_measure(const JointSpectralMeasure& measure, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open '" + path.string() + "' for writing");
  write_measure_json(measure, out);
  if (!out) throw DomainError("failed writing '" + path.string() + "'");
}

JointSpectralMeasure load_measure(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open measure file '" + path.string() + "'");
  return read_measure_json(in);
}

}  // namespace trispec
