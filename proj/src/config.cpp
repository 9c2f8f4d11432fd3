#include "mfix/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "mfix/errors.hpp"

namespace mfix {

namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
  std::map<std::string, Section> sections;
  std::map<std::string, std::size_t> section_lines;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"system",
       {"operator", "signature", "profile", "metric", "box_lower", "box_upper",
        "matrix", "offset"}},
      {"phi", {"kind", "alpha"}},
      {"solve", {"tolerance", "max_iterations", "start_lower", "start_upper"}},
      {"verify", {"samples", "seed"}},
      {"bounds", {"lower", "upper"}},
      {"pbvs", {"rhs", "lambda", "period", "grid_size"}},
  };
  return keys;
}

bool prefixed_key(const std::string& section, const std::string& key) {
  return (section == "system" && key.starts_with("poly.")) ||
         (section == "pbvs" && key.starts_with("param."));
}

RawConfig tokenize(std::string_view text) {
  RawConfig raw;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(line_no, "unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(current)) {
        fail_at(line_no, "unknown section [" + current + "]");
      }
      if (raw.section_lines.contains(current)) {
        fail_at(line_no, "duplicate section [" + current + "]");
      }
      raw.sections[current];
      raw.section_lines[current] = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail_at(line_no, "expected 'key = value'");
    }
    if (current.empty()) fail_at(line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const std::string where = "[" + current + "] " + key;
    if (key.empty()) fail_at(line_no, "[" + current + "] empty key");
    if (!known_keys().at(current).contains(key) &&
        !prefixed_key(current, key)) {
      fail_at(line_no, where + ": unknown key");
    }
    auto& section = raw.sections[current];
    if (section.contains(key)) fail_at(line_no, where + ": duplicate key");
    section[key] = Entry{value, line_no};
  }
  return raw;
}

// Field accessors with diagnostics.
class Fields {
 public:
  Fields(std::string name, const Section& section, std::size_t header_line)
      : name_(std::move(name)), section_(section), header_(header_line) {}

  bool has(const std::string& key) const { return section_.contains(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = section_.find(key);
    fail_at(it == section_.end() ? header_ : it->second.line,
            "[" + name_ + "] " + key + ": " + what);
  }

  const std::string& text(const std::string& key) const {
    const auto it = section_.find(key);
    if (it == section_.end()) fail(key, "required field is missing");
    if (it->second.value.empty()) fail(key, "empty value");
    return it->second.value;
  }

  double number(const std::string& key) const {
    return to_double(key, text(key));
  }

  double to_double(const std::string& key, std::string_view token) const {
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
      fail(key, "'" + std::string(token) + "' is not a number");
    }
    if (!std::isfinite(value)) fail(key, "value must be finite");
    return value;
  }

  std::uint64_t unsigned_number(const std::string& key) const {
    const auto& s = text(key);
    std::uint64_t value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(key, "'" + s + "' is not a non-negative integer");
    }
    return value;
  }

  Vector vector(const std::string& key) const {
    return split_numbers(key, text(key));
  }

  Vector split_numbers(const std::string& key, std::string_view s) const {
    Vector out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      const auto start = s.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      auto end = s.find_first_of(" \t", start);
      if (end == std::string_view::npos) end = s.size();
      out.push_back(to_double(key, s.substr(start, end - start)));
      pos = end;
    }
    if (out.empty()) fail(key, "expected at least one number");
    return out;
  }

  std::vector<std::string> words(const std::string& key) const {
    std::istringstream in(text(key));
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  }

  const Section& raw() const { return section_; }

 private:
  std::string name_;
  const Section& section_;
  std::size_t header_;
};

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += format_number(v[k]);
  }
  return out;
}

SystemSpec parse_system(const Fields& f) {
  SystemSpec spec;
  spec.name = f.text("operator");
  if (spec.name == "affine") {
    spec.kind = SystemKind::Affine;
  } else if (spec.name == "polynomial") {
    spec.kind = SystemKind::Polynomial;
  } else {
    spec.kind = SystemKind::Registry;
    try {
      find_system(spec.name);
    } catch (const ConfigError& e) {
      f.fail("operator", e.what());
    }
  }

  if (f.has("signature")) {
    try {
      spec.signature = MonotoneSignature::parse(f.text("signature")).to_string();
    } catch (const Error& e) {
      f.fail("signature", e.what());
    }
  }
  if (f.has("profile")) {
    for (double m : f.vector("profile")) {
      if (m < 1 || m != std::floor(m)) {
        f.fail("profile", "dimensions must be positive integers");
      }
      spec.profile.push_back(static_cast<std::size_t>(m));
    }
  }
  if (f.has("metric")) {
    for (const auto& w : f.words("metric")) {
      try {
        spec.metric.push_back(parse_metric_kind(w));
      } catch (const Error& e) {
        f.fail("metric", e.what());
      }
    }
  }
  if (f.has("box_lower") != f.has("box_upper")) {
    f.fail(f.has("box_lower") ? "box_upper" : "box_lower",
           "box_lower and box_upper must be given together");
  }
  if (f.has("box_lower")) {
    spec.box_lower = f.vector("box_lower");
    spec.box_upper = f.vector("box_upper");
    if (spec.box_lower.size() != spec.box_upper.size()) {
      f.fail("box_upper", "length differs from box_lower");
    }
    for (std::size_t k = 0; k < spec.box_lower.size(); ++k) {
      if (!(spec.box_lower[k] < spec.box_upper[k])) {
        f.fail("box_upper", "must exceed box_lower entrywise");
      }
    }
  }

  if (spec.kind != SystemKind::Registry && spec.profile.empty()) {
    f.fail("profile", "required field is missing");
  }
  if (spec.kind == SystemKind::Affine) {
    std::string_view rows = f.text("matrix");
    std::size_t pos = 0;
    while (pos <= rows.size()) {
      auto end = rows.find(';', pos);
      if (end == std::string_view::npos) end = rows.size();
      spec.matrix.push_back(f.split_numbers("matrix", rows.substr(pos, end - pos)));
      pos = end + 1;
    }
    spec.offset = f.vector("offset");
  } else {
    for (const auto* key : {"matrix", "offset"}) {
      if (f.has(key)) f.fail(key, "only valid for operator = affine");
    }
  }

  for (const auto& [key, entry] : f.raw()) {
    if (!key.starts_with("poly.")) continue;
    if (spec.kind != SystemKind::Polynomial) {
      f.fail(key, "only valid for operator = polynomial");
    }
    const auto index_text = key.substr(5);
    std::size_t index = 0;
    const auto res = std::from_chars(index_text.data(),
                                     index_text.data() + index_text.size(), index);
    if (res.ec != std::errc() || res.ptr != index_text.data() + index_text.size()) {
      f.fail(key, "expected poly.<output index>");
    }
    try {
      spec.polynomials[index] = parse_polynomial(entry.value);
    } catch (const ConfigError& e) {
      f.fail(key, e.what());
    }
  }
  if (spec.kind == SystemKind::Polynomial) {
    if (!spec.signature) f.fail("signature", "required for operator = polynomial");
    std::size_t total = 0;
    for (auto m : spec.profile) total += m;
    for (std::size_t k = 0; k < total; ++k) {
      if (!spec.polynomials.contains(k)) {
        f.fail("poly." + std::to_string(k), "required field is missing");
      }
    }
    if (spec.polynomials.size() != total) {
      f.fail("poly." + std::to_string(spec.polynomials.rbegin()->first),
             "output index out of range");
    }
  }
  return spec;
}

PhiSpec parse_phi(const Fields& f) {
  PhiSpec spec;
  const auto& kind = f.text("kind");
  if (kind == "linear") {
    spec.kind = ComparisonFunction::Kind::Linear;
    spec.alpha = f.number("alpha");
    if (!(spec.alpha >= 0.0 && spec.alpha < 1.0)) {
      f.fail("alpha", "must satisfy 0 <= alpha < 1");
    }
  } else if (kind == "log") {
    spec.kind = ComparisonFunction::Kind::Log;
  } else if (kind == "rational") {
    spec.kind = ComparisonFunction::Kind::Rational;
  } else {
    f.fail("kind", "expected linear, log or rational");
  }
  if (spec.kind != ComparisonFunction::Kind::Linear && f.has("alpha")) {
    f.fail("alpha", "only valid for kind = linear");
  }
  return spec;
}

SolveSpec parse_solve(const Fields& f) {
  SolveSpec spec;
  if (f.has("tolerance")) {
    spec.tolerance = f.number("tolerance");
    if (!(spec.tolerance > 0.0)) f.fail("tolerance", "must be positive");
  }
  if (f.has("max_iterations")) {
    spec.max_iterations = f.unsigned_number("max_iterations");
    if (spec.max_iterations == 0) f.fail("max_iterations", "must be positive");
  }
  if (f.has("start_lower") != f.has("start_upper")) {
    f.fail(f.has("start_lower") ? "start_upper" : "start_lower",
           "start_lower and start_upper must be given together");
  }
  if (f.has("start_lower")) {
    spec.start_lower = f.vector("start_lower");
    spec.start_upper = f.vector("start_upper");
  }
  return spec;
}

VerifySpec parse_verify(const Fields& f) {
  VerifySpec spec;
  if (f.has("samples")) {
    spec.samples = f.unsigned_number("samples");
    if (spec.samples == 0) f.fail("samples", "must be positive");
  }
  if (f.has("seed")) spec.seed = f.unsigned_number("seed");
  return spec;
}

BoundsSpec parse_bounds(const Fields& f) {
  BoundsSpec spec;
  spec.lower = f.vector("lower");
  spec.upper = f.vector("upper");
  if (spec.lower.size() != spec.upper.size()) {
    f.fail("upper", "length differs from lower");
  }
  return spec;
}

PbvsSpec parse_pbvs(const Fields& f) {
  PbvsSpec spec;
  spec.rhs = f.text("rhs");
  const RegisteredRhs* entry = nullptr;
  try {
    entry = &find_rhs(spec.rhs);
  } catch (const ConfigError& e) {
    f.fail("rhs", e.what());
  }
  spec.lambda = f.number("lambda");
  if (!(spec.lambda > 0.0)) f.fail("lambda", "must be positive");
  if (f.has("period")) {
    spec.period = f.number("period");
    if (!(*spec.period > 0.0)) f.fail("period", "must be positive");
  }
  if (f.has("grid_size")) {
    spec.grid_size = f.unsigned_number("grid_size");
    if (spec.grid_size < 3) f.fail("grid_size", "must be at least 3");
  }
  for (const auto& [key, value] : f.raw()) {
    if (!key.starts_with("param.")) continue;
    const auto name = key.substr(6);
    if (!entry->defaults.contains(name)) {
      f.fail(key, "unknown parameter for rhs '" + spec.rhs + "'");
    }
    spec.params[name] = f.number(key);
  }
  return spec;
}

std::string kind_name(ComparisonFunction::Kind kind) {
  switch (kind) {
    case ComparisonFunction::Kind::Linear: return "linear";
    case ComparisonFunction::Kind::Log: return "log";
    case ComparisonFunction::Kind::Rational: return "rational";
    case ComparisonFunction::Kind::Custom: return "custom";
  }
  return "custom";
}

MetricProfile metric_for(const SystemSpec& spec, std::size_t order) {
  if (spec.metric.empty()) return {};
  if (spec.metric.size() == 1) return MetricProfile::uniform(order, spec.metric[0]);
  if (spec.metric.size() != order) {
    throw StructuralError("metric lists " + std::to_string(spec.metric.size()) +
                          " kinds for " + std::to_string(order) + " components");
  }
  return MetricProfile(spec.metric);
}

}  // namespace

ComparisonFunction PhiSpec::build() const {
  switch (kind) {
    case ComparisonFunction::Kind::Linear:
      return ComparisonFunction::linear(alpha);
    case ComparisonFunction::Kind::Log:
      return ComparisonFunction::log();
    case ComparisonFunction::Kind::Rational:
      return ComparisonFunction::rational();
    case ComparisonFunction::Kind::Custom:
      break;
  }
  throw ConfigError("custom comparison functions cannot come from a config");
}

ProblemConfig parse_config(std::string_view text) {
  const RawConfig raw = tokenize(text);
  ProblemConfig config;
  auto fields = [&](const std::string& name) {
    return Fields(name, raw.sections.at(name), raw.section_lines.at(name));
  };
  if (raw.sections.contains("system")) config.system = parse_system(fields("system"));
  if (raw.sections.contains("phi")) config.phi = parse_phi(fields("phi"));
  if (raw.sections.contains("solve")) config.solve = parse_solve(fields("solve"));
  if (raw.sections.contains("verify")) config.verify = parse_verify(fields("verify"));
  if (raw.sections.contains("bounds")) config.bounds = parse_bounds(fields("bounds"));
  if (raw.sections.contains("pbvs")) config.pbvs = parse_pbvs(fields("pbvs"));
  if (!config.system && !config.pbvs) {
    throw ConfigError("line 1: config needs a [system] or a [pbvs] section");
  }
  return config;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const ProblemConfig& config) {
  std::ostringstream out;
  bool first = true;
  auto section = [&](const char* name) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
  };
  if (config.system) {
    const auto& s = *config.system;
    section("system");
    out << "operator = " << s.name << '\n';
    if (s.signature) out << "signature = " << *s.signature << '\n';
    if (!s.profile.empty()) {
      out << "profile =";
      for (auto m : s.profile) out << ' ' << m;
      out << '\n';
    }
    if (!s.metric.empty()) {
      out << "metric =";
      for (auto k : s.metric) out << ' ' << to_string(k);
      out << '\n';
    }
    if (!s.box_lower.empty()) {
      out << "box_lower = " << format_vector(s.box_lower) << '\n';
      out << "box_upper = " << format_vector(s.box_upper) << '\n';
    }
    if (s.kind == SystemKind::Affine) {
      out << "matrix = ";
      for (std::size_t r = 0; r < s.matrix.size(); ++r) {
        if (r) out << " ; ";
        out << format_vector(s.matrix[r]);
      }
      out << '\n';
      out << "offset = " << format_vector(s.offset) << '\n';
    }
    for (const auto& [k, p] : s.polynomials) {
      out << "poly." << k << " = " << format_polynomial(p) << '\n';
    }
  }
  if (config.phi) {
    section("phi");
    out << "kind = " << kind_name(config.phi->kind) << '\n';
    if (config.phi->kind == ComparisonFunction::Kind::Linear) {
      out << "alpha = " << format_number(config.phi->alpha) << '\n';
    }
  }
  section("solve");
  out << "tolerance = " << format_number(config.solve.tolerance) << '\n';
  out << "max_iterations = " << config.solve.max_iterations << '\n';
  if (config.solve.start_lower) {
    out << "start_lower = " << format_vector(*config.solve.start_lower) << '\n';
    out << "start_upper = " << format_vector(*config.solve.start_upper) << '\n';
  }
  section("verify");
  out << "samples = " << config.verify.samples << '\n';
  out << "seed = " << config.verify.seed << '\n';
  if (config.bounds) {
    section("bounds");
    out << "lower = " << format_vector(config.bounds->lower) << '\n';
    out << "upper = " << format_vector(config.bounds->upper) << '\n';
  }
  if (config.pbvs) {
    const auto& p = *config.pbvs;
    section("pbvs");
    out << "rhs = " << p.rhs << '\n';
    out << "lambda = " << format_number(p.lambda) << '\n';
    if (p.period) out << "period = " << format_number(*p.period) << '\n';
    out << "grid_size = " << p.grid_size << '\n';
    for (const auto& [name, value] : p.params) {
      out << "param." << name << " = " << format_number(value) << '\n';
    }
  }
  return out.str();
}

PartiallyMonotoneSystem build_system(const SystemSpec& spec) {
  switch (spec.kind) {
    case SystemKind::Registry: {
      const auto& entry = find_system(spec.name);
      if (spec.signature &&
          MonotoneSignature::parse(*spec.signature) != entry.signature) {
        throw ValidationError("signature " + *spec.signature +
                              " does not match operator '" + spec.name +
                              "' (" + entry.signature.to_string() + ")");
      }
      if (!spec.profile.empty() && spec.profile != entry.profile) {
        throw StructuralError("profile does not match operator '" + spec.name +
                              "'");
      }
      auto base = std::make_shared<const PartiallyMonotoneSystem>(entry.build());
      if (spec.metric.empty()) return *base;
      std::vector<ComponentMap> ops;
      for (std::size_t i = 0; i < base->order(); ++i) {
        ops.push_back([base, i](const ProductPoint& x) {
          return base->evaluate(i, x);
        });
      }
      return PartiallyMonotoneSystem(base->signature(), std::move(ops),
                                     base->profile(),
                                     metric_for(spec, base->order()));
    }
    case SystemKind::Affine: {
      const auto derived = affine_signature(spec.matrix, spec.profile);
      if (spec.signature &&
          MonotoneSignature::parse(*spec.signature) != derived) {
        throw ValidationError("signature " + *spec.signature +
                              " disagrees with the coefficient signs (" +
                              derived.to_string() + ")");
      }
      return affine_system(derived, spec.matrix, spec.offset, spec.profile,
                           metric_for(spec, spec.profile.size()));
    }
    case SystemKind::Polynomial: {
      std::vector<Polynomial> polys;
      for (const auto& [k, p] : spec.polynomials) polys.push_back(p);
      auto signature = MonotoneSignature::parse(spec.signature.value_or(""));
      if (signature.order() != spec.profile.size()) {
        throw StructuralError("signature order differs from the profile length");
      }
      return polynomial_system(std::move(signature), std::move(polys),
                               spec.profile,
                               metric_for(spec, spec.profile.size()));
    }
  }
  throw StructuralError("unknown system kind");
}

std::optional<ComparisonFunction> resolve_phi(const ProblemConfig& config) {
  if (config.phi) return config.phi->build();
  if (config.system && config.system->kind == SystemKind::Registry) {
    return find_system(config.system->name).phi;
  }
  if (config.pbvs) return find_rhs(config.pbvs->rhs).phi;
  return std::nullopt;
}

SamplingBox resolve_box(const SystemSpec& spec) {
  const DimensionProfile profile = spec.kind == SystemKind::Registry
                                       ? find_system(spec.name).profile
                                       : spec.profile;
  if (spec.box_lower.empty()) {
    throw ConfigError("[system] box_lower: required for sampling");
  }
  const std::size_t n = profile.size();
  if (spec.box_lower.size() != 1 && spec.box_lower.size() != n) {
    throw ConfigError("[system] box_lower: expected 1 or " + std::to_string(n) +
                      " values");
  }
  std::vector<Vector> lower;
  std::vector<Vector> upper;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = spec.box_lower.size() == 1 ? 0 : j;
    lower.emplace_back(profile[j], spec.box_lower[k]);
    upper.emplace_back(profile[j], spec.box_upper[k]);
  }
  SamplingBox box{ProductPoint(std::move(lower)), ProductPoint(std::move(upper))};
  box.validate();
  return box;
}

SolveConfig solve_config(const ProblemConfig& config) {
  SolveConfig out;
  out.tolerance = config.solve.tolerance;
  out.max_iterations = config.solve.max_iterations;
  if (auto phi = resolve_phi(config)) out.phi = *phi;
  out.validate();
  return out;
}

PbvsProblem build_pbvs(const ProblemConfig& config) {
  if (!config.pbvs) throw ConfigError("config has no [pbvs] section");
  const auto& spec = *config.pbvs;
  const auto& entry = find_rhs(spec.rhs);
  ParameterMap params = entry.defaults;
  for (const auto& [k, v] : spec.params) params[k] = v;
  PbvsProblem problem;
  problem.period = spec.period.value_or(entry.period);
  problem.lambda = spec.lambda;
  problem.grid_size = spec.grid_size;
  problem.f = entry.make(params, problem.lambda, problem.period);
  problem.phi = config.phi ? config.phi->build() : entry.phi;
  problem.validate();
  return problem;
}

std::optional<CoupledLowerUpperSolution> pbvs_bounds(
    const ProblemConfig& config, std::size_t grid_size) {
  if (!config.bounds) return std::nullopt;
  const auto& b = *config.bounds;
  if (b.lower.size() != 3 || b.upper.size() != 3) {
    throw ConfigError(
        "[bounds] lower: PBVS bounds need three constants (x y z / u v w)");
  }
  auto constant = [grid_size](double c) { return Vector(grid_size, c); };
  return CoupledLowerUpperSolution{constant(b.lower[0]), constant(b.lower[1]),
                                   constant(b.lower[2]), constant(b.upper[0]),
                                   constant(b.upper[1]), constant(b.upper[2])};
}

}  // namespace mfix
