#pragma once

// Problem definition files. The format is INI-like:
//
//   [system]            operator, signature, profile, metric, box_lower,
//                       box_upper, matrix, offset, poly.<k>
//   [phi]               kind (linear | log | rational), alpha
//   [solve]             tolerance, max_iterations, start_lower, start_upper
//   [verify]            samples, seed
//   [bounds]            lower, upper
//   [pbvs]              rhs, lambda, period, grid_size, param.<name>
//
// '#' and ';' at the start of a line begin comments. Vectors are whitespace
// separated; matrix rows are separated by ';'.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfix/applications.hpp"
#include "mfix/core.hpp"
#include "mfix/solver.hpp"
#include "mfix/systems.hpp"
#include "mfix/verify.hpp"

namespace mfix {

enum class SystemKind { Registry, Affine, Polynomial };

struct SystemSpec {
  SystemKind kind = SystemKind::Registry;
  /// Registry name for SystemKind::Registry; "affine" / "polynomial" otherwise.
  std::string name;
  std::optional<std::string> signature;
  DimensionProfile profile;
  /// One entry per component, or empty for the default.
  std::vector<MetricKind> metric;
  /// One bound per component (applied to all its entries), or empty.
  Vector box_lower;
  Vector box_upper;
  Matrix matrix;
  Vector offset;
  /// Keyed by flattened output index.
  std::map<std::size_t, Polynomial> polynomials;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

struct PhiSpec {
  ComparisonFunction::Kind kind = ComparisonFunction::Kind::Linear;
  double alpha = 0.5;

  ComparisonFunction build() const;
  friend bool operator==(const PhiSpec&, const PhiSpec&) = default;
};

struct SolveSpec {
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000;
  std::optional<Vector> start_lower;
  std::optional<Vector> start_upper;

  friend bool operator==(const SolveSpec&, const SolveSpec&) = default;
};

struct VerifySpec {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;

  friend bool operator==(const VerifySpec&, const VerifySpec&) = default;
};

struct BoundsSpec {
  Vector lower;
  Vector upper;

  friend bool operator==(const BoundsSpec&, const BoundsSpec&) = default;
};

struct PbvsSpec {
  std::string rhs;
  double lambda = 0.0;
  std::optional<double> period;
  std::size_t grid_size = 129;
  ParameterMap params;

  friend bool operator==(const PbvsSpec&, const PbvsSpec&) = default;
};

struct ProblemConfig {
  std::optional<SystemSpec> system;
  std::optional<PhiSpec> phi;
  SolveSpec solve;
  VerifySpec verify;
  std::optional<BoundsSpec> bounds;
  std::optional<PbvsSpec> pbvs;

  friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

/// Throws ConfigError with "line N: [section] key: message" diagnostics.
ProblemConfig parse_config(std::string_view text);
ProblemConfig load_config(const std::string& path);
/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ProblemConfig& config);

/// Builds the system described by [system]. Structural problems (wrong table
/// sizes, a signature that disagrees with the coefficient signs) throw
/// StructuralError or ValidationError.
PartiallyMonotoneSystem build_system(const SystemSpec& spec);

/// [phi] if present, otherwise the registry default; nullopt when neither.
std::optional<ComparisonFunction> resolve_phi(const ProblemConfig& config);

/// Sampling box from [system]. Throws ConfigError when no box is given.
SamplingBox resolve_box(const SystemSpec& spec);

SolveConfig solve_config(const ProblemConfig& config);

/// PBVS problem from [pbvs] and [phi]; throws ConfigError when [pbvs] is
/// missing.
PbvsProblem build_pbvs(const ProblemConfig& config);
/// Constant lower/upper grid functions from [bounds] (three values each).
std::optional<CoupledLowerUpperSolution> pbvs_bounds(
    const ProblemConfig& config, std::size_t grid_size);

}  // namespace mfix
