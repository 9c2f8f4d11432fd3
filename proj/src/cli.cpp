#include "mfix/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "mfix/applications.hpp"
#include "mfix/config.hpp"
#include "mfix/errors.hpp"
#include "mfix/report.hpp"
#include "mfix/solver.hpp"
#include "mfix/verify.hpp"

namespace mfix {

LogLevel parse_log_level(const char* value) {
  if (value == nullptr) return LogLevel::Info;
  const std::string_view v(value);
  if (v.empty() || v == "info") return LogLevel::Info;
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "trace") return LogLevel::Trace;
  throw ConfigError("MFIX_LOG must be quiet, info or trace (got '" +
                    std::string(v) + "')");
}

namespace {

class Log {
 public:
  Log(LogLevel level, std::ostream& err) : level_(level), err_(err) {}
  void info(const std::string& msg) const {
    if (level_ != LogLevel::Quiet) err_ << "[info] " << msg << '\n';
  }
  void trace(const std::string& msg) const {
    if (level_ == LogLevel::Trace) err_ << "[trace] " << msg << '\n';
  }
  bool tracing() const { return level_ == LogLevel::Trace; }

 private:
  LogLevel level_;
  std::ostream& err_;
};

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tol = 0.0;
  std::size_t max_iter = 0;
  std::string out;
  std::size_t count = 0;
  std::string signature;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* max_iter_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* count_opt = nullptr;
  CLI::Option* signature_opt = nullptr;
};

std::string profile_text(const DimensionProfile& profile) {
  std::string s;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j) s += ' ';
    s += std::to_string(profile[j]);
  }
  return s;
}

void emit(const Report& report, const Flags& flags, std::ostream& out) {
  if (flags.out_opt->count() == 0) {
    out << report.str();
    return;
  }
  std::ofstream file(flags.out, std::ios::binary);
  if (!file) throw ConfigError("cannot write report to '" + flags.out + "'");
  file << report.str();
}

void apply_solve_overrides(ProblemConfig& config, const Flags& flags) {
  if (flags.tol_opt->count()) {
    if (!(flags.tol > 0.0)) throw ConfigError("--tol: must be positive");
    config.solve.tolerance = flags.tol;
  }
  if (flags.max_iter_opt->count()) {
    if (flags.max_iter == 0) throw ConfigError("--max-iter: must be positive");
    config.solve.max_iterations = flags.max_iter;
  }
}

const SystemSpec& require_system(const ProblemConfig& config) {
  if (!config.system) throw ConfigError("config has no [system] section");
  return *config.system;
}

ProductPoint flat_point(const Vector& flat, const DimensionProfile& profile,
                        const char* what) {
  std::size_t total = 0;
  for (auto m : profile) total += m;
  if (flat.size() != total) {
    throw StructuralError(std::string(what) + " has " +
                          std::to_string(flat.size()) + " entries, expected " +
                          std::to_string(total));
  }
  return ProductPoint::from_flat(flat, profile);
}

int cmd_solve(const Flags& flags, std::ostream& out, const Log& log) {
  ProblemConfig config = load_config(flags.config);
  apply_solve_overrides(config, flags);
  const SystemSpec& spec = require_system(config);
  const SolveConfig solve_cfg = solve_config(config);

  const PartiallyMonotoneSystem system = build_system(spec);
  const auto& profile = system.profile();
  std::optional<SamplingBox> box;
  if (!spec.box_lower.empty()) {
    box = resolve_box(spec);
  }
  const MixedMonotoneOperator op =
      box ? build_validated_operator(system, *box, config.verify.samples,
                                     config.verify.seed)
          : build_mixed_operator(system);
  log.info("system " + spec.name + " with signature " +
           system.signature().to_string());

  ProductPoint u0 = ProductPoint::filled(profile, 0.0);
  ProductPoint v0 = u0;
  std::string start_source = "zero";
  if (config.solve.start_lower) {
    u0 = flat_point(*config.solve.start_lower, profile, "[solve] start_lower");
    v0 = flat_point(*config.solve.start_upper, profile, "[solve] start_upper");
    start_source = "solve";
  } else if (config.bounds) {
    u0 = flat_point(config.bounds->lower, profile, "[bounds] lower");
    v0 = flat_point(config.bounds->upper, profile, "[bounds] upper");
    const auto check = verify_coupled_bounds(system, u0, v0);
    if (!check.holds) {
      const auto& f = *check.first_failure;
      throw ValidationError("[bounds] coupled bounds fail at component " +
                            std::to_string(f.component) + ", entry " +
                            std::to_string(f.entry));
    }
    start_source = "bounds";
  }

  IterationObserver observer;
  if (log.tracing()) {
    observer = [&log](const CoupledIterationState& s) {
      log.trace("iteration " + std::to_string(s.iteration) + " residual " +
                format_double(s.residual) + " gap " + format_double(s.gap));
    };
  }
  const FixedPointResult result = solve(op, u0, v0, solve_cfg, observer);

  Report report("solve");
  report.set("operator", spec.name)
      .set("signature", system.signature().to_string())
      .set("profile", profile_text(profile))
      .set("phi", solve_cfg.phi.describe())
      .set("tolerance", solve_cfg.tolerance)
      .set("max_iterations", solve_cfg.max_iterations)
      .set("start", start_source)
      .set("status", std::string(to_string(result.status)))
      .set("iterations", result.iterations)
      .set("residual", result.residual)
      .set("gap", result.gap)
      .set("defect", result.defect)
      .set("bracket_valid", result.bracket_valid);
  // d(u^n, x*) <= alpha^n d(u^1, u^0) / (1 - alpha) and the gap contracts
  // from d(u^0, v^0).
  if (solve_cfg.phi.kind() == ComparisonFunction::Kind::Linear &&
      !result.history.empty()) {
    const double d0 =
        std::max(system.distance(u0, v0),
                 result.history.front().residual / (1.0 - solve_cfg.phi.alpha()));
    if (auto n = a_priori_iterations(solve_cfg.phi, d0, solve_cfg.tolerance)) {
      report.set("a_priori_iterations", *n);
    }
  }
  const Vector solution = result.solution.flatten();
  report.set("solution", std::span<const double>(solution));
  report.columns({"iteration", "residual", "gap", "bracket_valid"});
  for (const auto& rec : result.history) {
    report.row({std::to_string(rec.iteration), format_double(rec.residual),
                format_double(rec.gap), rec.bracket_valid ? "1" : "0"});
  }
  emit(report, flags, out);
  if (flags.out_opt->count()) {
    out << "solve: " << to_string(result.status) << " after "
        << result.iterations << " iterations, residual "
        << format_double(result.residual) << ", defect "
        << format_double(result.defect) << '\n';
  }
  log.info(std::string("solve finished: ") +
           std::string(to_string(result.status)));
  return result.converged() ? kExitOk : kExitNoConvergence;
}

int cmd_verify(const Flags& flags, std::ostream& out, const Log& log) {
  ProblemConfig config = load_config(flags.config);
  if (flags.seed_opt->count()) config.verify.seed = flags.seed;
  if (flags.samples_opt->count()) {
    if (flags.samples == 0) throw ConfigError("--samples: must be positive");
    config.verify.samples = flags.samples;
  }
  const SystemSpec& spec = require_system(config);
  const auto phi = resolve_phi(config);
  if (!phi) throw ConfigError("[phi] kind: required for verification");
  const SamplingBox box = resolve_box(spec);
  const PartiallyMonotoneSystem system = build_system(spec);

  log.info("sampling " + std::to_string(config.verify.samples) +
           " points with seed " + std::to_string(config.verify.seed));
  const ContractionReport contraction = verify_contraction(
      system, *phi, box, config.verify.samples, config.verify.seed);
  const MonotonicityReport monotone = check_declared_monotonicity(
      system, box, config.verify.samples, config.verify.seed);
  std::optional<CoupledBoundsReport> bounds;
  if (config.bounds) {
    bounds = verify_coupled_bounds(
        system, flat_point(config.bounds->lower, system.profile(), "[bounds] lower"),
        flat_point(config.bounds->upper, system.profile(), "[bounds] upper"));
  }

  const bool ok = contraction.certified && monotone.consistent() &&
                  (!bounds || bounds->holds);
  Report report("verify");
  report.set("operator", spec.name)
      .set("signature", system.signature().to_string())
      .set("profile", profile_text(system.profile()))
      .set("phi", contraction.phi)
      .set("samples", contraction.samples)
      .set("seed", std::to_string(contraction.seed))
      .set("slack", contraction.slack)
      .set("max_ratio", contraction.max_ratio)
      .set("contraction_violations", contraction.violations.size())
      .set("monotonicity_violations", monotone.violations.size())
      .set("certified", contraction.certified);
  if (bounds) {
    report.set("bounds_hold", bounds->holds);
    if (bounds->first_failure) {
      const auto& f = *bounds->first_failure;
      report.set("bounds_failure",
                 std::string(f.lower_family ? "lower" : "upper") +
                     " component " + std::to_string(f.component) + " entry " +
                     std::to_string(f.entry) + " bound " +
                     format_double(f.bound) + " image " +
                     format_double(f.image));
    }
  }
  report.set("verdict", std::string(ok ? "pass" : "fail"))
      .set("note", ContractionReport::kSoundnessNote);
  report.columns({"check", "component", "variable", "sample", "lhs", "rhs"});
  for (const auto& v : contraction.violations) {
    report.row({"contraction", std::to_string(v.component), "-",
                std::to_string(v.sample), format_double(v.lhs),
                format_double(v.rhs)});
  }
  for (const auto& v : monotone.violations) {
    report.row({"monotonicity", std::to_string(v.component),
                std::to_string(v.variable), std::to_string(v.sample), "-",
                "-"});
  }
  emit(report, flags, out);
  if (flags.out_opt->count()) {
    out << "verify: " << (ok ? "pass" : "fail") << ", "
        << contraction.violations.size() << " contraction and "
        << monotone.violations.size() << " monotonicity violations\n";
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_classify(const Flags& flags, std::ostream& out) {
  const bool has_count = flags.count_opt->count() > 0;
  const bool has_sig = flags.signature_opt->count() > 0;
  if (has_count == has_sig) {
    throw ConfigError("classify takes either a signature or --count N");
  }
  if (has_count) {
    const ReducibleCount c = count_reducible(flags.count);
    out << c.total << ' ' << c.reducible << '\n';
    return kExitOk;
  }
  const MonotoneSignature signature = MonotoneSignature::parse(flags.signature);
  const ReducibilityVerdict verdict = classify_reducibility(signature);
  out << "signature = " << signature.to_string() << '\n';
  out << "reducible = " << (verdict.reducible ? "true" : "false") << '\n';
  if (verdict.witness) {
    out << "witness =";
    for (int e : *verdict.witness) out << ' ' << (e > 0 ? '+' : '-');
    out << '\n';
  }
  return kExitOk;
}

int cmd_pbvs(const Flags& flags, std::ostream& out, const Log& log) {
  ProblemConfig config = load_config(flags.config);
  apply_solve_overrides(config, flags);
  const PbvsProblem problem = build_pbvs(config);
  SolveConfig solve_cfg = solve_config(config);
  solve_cfg.phi = problem.phi;
  const auto bounds = pbvs_bounds(config, problem.grid_size);

  log.info("pbvs " + config.pbvs->rhs + " on " +
           std::to_string(problem.grid_size) + " nodes");
  const PbvsSolution sol = solve_pbvs(problem, bounds, solve_cfg);
  const auto& result = sol.result;

  Report report("pbvs");
  report.set("rhs", config.pbvs->rhs)
      .set("lambda", problem.lambda)
      .set("period", problem.period)
      .set("grid_size", problem.grid_size)
      .set("phi", problem.phi.describe())
      .set("tolerance", solve_cfg.tolerance)
      .set("bounds", bounds.has_value())
      .set("status", std::string(to_string(result.status)))
      .set("iterations", result.iterations)
      .set("residual", result.residual)
      .set("gap", result.gap)
      .set("fixed_point_defect", result.defect)
      .set("ode_defect", sol.defect);
  report.columns({"t", "x", "y", "z"});
  for (std::size_t k = 0; k < sol.t.size(); ++k) {
    const double row[] = {sol.t[k], sol.x[k], sol.y[k], sol.z[k]};
    report.row(std::span<const double>(row));
  }
  emit(report, flags, out);
  if (flags.out_opt->count()) {
    out << "pbvs: " << to_string(result.status) << " after "
        << result.iterations << " iterations, ode defect "
        << format_double(sol.defect) << '\n';
  }
  return result.converged() ? kExitOk : kExitNoConvergence;
}

// Adds --config and returns the --out option.
CLI::Option* add_config_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "problem definition file")
      ->required();
  return sub->add_option("--out", flags.out, "write the report here");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  LogLevel level;
  try {
    level = parse_log_level(std::getenv("MFIX_LOG"));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  const Log log(level, err);

  CLI::App app("Coupled fixed points of partially monotone systems", "mfix");
  app.require_subcommand(1);
  Flags flags;

  auto* solve_cmd = app.add_subcommand("solve", "run the coupled iteration");
  auto* solve_out = add_config_flags(solve_cmd, flags);
  auto* solve_tol = solve_cmd->add_option("--tol", flags.tol, "tolerance");
  auto* solve_iter =
      solve_cmd->add_option("--max-iter", flags.max_iter, "iteration budget");

  auto* verify_cmd = app.add_subcommand("verify", "sampled certification");
  auto* verify_out = add_config_flags(verify_cmd, flags);
  flags.seed_opt = verify_cmd->add_option("--seed", flags.seed, "sampling seed");
  flags.samples_opt =
      verify_cmd->add_option("--samples", flags.samples, "sample count");

  auto* classify_cmd =
      app.add_subcommand("classify", "reducibility of a signature");
  flags.signature_opt = classify_cmd->add_option(
      "signature", flags.signature, "signature literal such as ++-/-++/---");
  flags.count_opt = classify_cmd->add_option(
      "--count", flags.count, "count reducible signatures of order N");

  auto* pbvs_cmd = app.add_subcommand("pbvs", "periodic boundary-value system");
  auto* pbvs_out = add_config_flags(pbvs_cmd, flags);
  auto* pbvs_tol = pbvs_cmd->add_option("--tol", flags.tol, "tolerance");
  auto* pbvs_iter =
      pbvs_cmd->add_option("--max-iter", flags.max_iter, "iteration budget");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (solve_cmd->parsed()) {
      flags.out_opt = solve_out;
      flags.tol_opt = solve_tol;
      flags.max_iter_opt = solve_iter;
      return cmd_solve(flags, out, log);
    }
    if (verify_cmd->parsed()) {
      flags.out_opt = verify_out;
      return cmd_verify(flags, out, log);
    }
    if (classify_cmd->parsed()) return cmd_classify(flags, out);
    if (pbvs_cmd->parsed()) {
      flags.out_opt = pbvs_out;
      flags.tol_opt = pbvs_tol;
      flags.max_iter_opt = pbvs_iter;
      return cmd_pbvs(flags, out, log);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << '\n';
    return kExitValidation;
  } catch (const StructuralError& e) {
    err << "validation failed: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return verify_cmd->parsed() ? kExitVerifyFailed : kExitNoConvergence;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitParse;
}

}  // namespace mfix
