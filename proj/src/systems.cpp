#include "mfix/systems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>

namespace mfix {

namespace {

std::vector<std::size_t> offsets(const DimensionProfile& profile) {
  std::vector<std::size_t> out(profile.size() + 1, 0);
  for (std::size_t j = 0; j < profile.size(); ++j) {
    out[j + 1] = out[j] + profile[j];
  }
  return out;
}

void require_square(const Matrix& matrix, std::size_t d) {
  if (matrix.size() != d) {
    throw StructuralError("affine matrix has " + std::to_string(matrix.size()) +
                          " rows, expected " + std::to_string(d));
  }
  for (const auto& row : matrix) {
    if (row.size() != d) {
      throw StructuralError("affine matrix row has " +
                            std::to_string(row.size()) + " entries, expected " +
                            std::to_string(d));
    }
  }
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

MonotoneSignature affine_signature(const Matrix& matrix,
                                   const DimensionProfile& profile) {
  const auto off = offsets(profile);
  require_square(matrix, off.back());
  const std::size_t n = profile.size();
  std::vector<Monotonicity> entries(n * n, Monotonicity::Increasing);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool pos = false;
      bool neg = false;
      for (std::size_t r = off[i]; r < off[i + 1]; ++r) {
        for (std::size_t c = off[j]; c < off[j + 1]; ++c) {
          pos = pos || matrix[r][c] > 0.0;
          neg = neg || matrix[r][c] < 0.0;
        }
      }
      if (pos && neg) {
        throw ValidationError("affine block (" + std::to_string(i) + ", " +
                              std::to_string(j) +
                              ") has entries of both signs");
      }
      if (neg) entries[i * n + j] = Monotonicity::Decreasing;
    }
  }
  return MonotoneSignature(n, std::move(entries));
}

PartiallyMonotoneSystem affine_system(MonotoneSignature signature,
                                      const Matrix& matrix,
                                      const Vector& offset,
                                      const DimensionProfile& profile,
                                      MetricProfile metric) {
  const auto off = offsets(profile);
  const std::size_t d = off.back();
  require_square(matrix, d);
  if (offset.size() != d) {
    throw StructuralError("affine offset has " + std::to_string(offset.size()) +
                          " entries, expected " + std::to_string(d));
  }
  auto shared_matrix = std::make_shared<const Matrix>(matrix);
  auto shared_offset = std::make_shared<const Vector>(offset);
  std::vector<ComponentMap> ops;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    ops.push_back([shared_matrix, shared_offset, lo = off[i],
                   hi = off[i + 1]](const ProductPoint& x) {
      const Vector flat = x.flatten();
      Vector out(hi - lo);
      for (std::size_t r = lo; r < hi; ++r) {
        double acc = (*shared_offset)[r];
        const Vector& row = (*shared_matrix)[r];
        for (std::size_t c = 0; c < flat.size(); ++c) acc += row[c] * flat[c];
        out[r - lo] = acc;
      }
      return out;
    });
  }
  return PartiallyMonotoneSystem(std::move(signature), std::move(ops), profile,
                                 std::move(metric));
}

// ---------------------------------------------------------------------------
// Polynomials

Polynomial parse_polynomial(std::string_view text) {
  Polynomial poly;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> void {
    throw ConfigError("polynomial \"" + std::string(text) + "\" at offset " +
                      std::to_string(pos) + ": " + why);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto read_unsigned = [&]() -> std::size_t {
    std::size_t value = 0;
    auto res = std::from_chars(text.data() + pos, text.data() + text.size(),
                               value);
    if (res.ec != std::errc()) fail("expected an integer");
    pos = static_cast<std::size_t>(res.ptr - text.data());
    return value;
  };

  skip_ws();
  if (pos == text.size()) fail("empty polynomial");
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == text.size()) break;
    double sign = 1.0;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    } else if (!first) {
      fail("expected '+' or '-' between terms");
    }
    first = false;

    Monomial term;
    term.coefficient = sign;
    bool need_factor = true;
    while (need_factor) {
      skip_ws();
      if (pos == text.size()) fail("unexpected end of input");
      if (text[pos] == 'x') {
        ++pos;
        const std::size_t index = read_unsigned();
        unsigned power = 1;
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip_ws();
          power = static_cast<unsigned>(read_unsigned());
        }
        term.powers.emplace_back(index, power);
      } else {
        double value = 0.0;
        auto res = std::from_chars(text.data() + pos,
                                   text.data() + text.size(), value);
        if (res.ec != std::errc()) fail("expected a number or variable");
        pos = static_cast<std::size_t>(res.ptr - text.data());
        term.coefficient *= value;
      }
      skip_ws();
      need_factor = pos < text.size() && text[pos] == '*';
      if (need_factor) ++pos;
    }
    std::sort(term.powers.begin(), term.powers.end());
    std::vector<std::pair<std::size_t, unsigned>> merged;
    for (const auto& p : term.powers) {
      if (!merged.empty() && merged.back().first == p.first) {
        merged.back().second += p.second;
      } else {
        merged.push_back(p);
      }
    }
    std::erase_if(merged, [](const auto& p) { return p.second == 0; });
    term.powers = std::move(merged);
    poly.push_back(std::move(term));
  }
  return poly;
}

std::string format_polynomial(const Polynomial& p) {
  std::string out;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const double c = p[t].coefficient;
    const bool negative = std::signbit(c);
    if (t == 0) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    out += shortest(std::abs(c));
    for (const auto& [index, power] : p[t].powers) {
      out += "*x" + std::to_string(index);
      if (power != 1) out += "^" + std::to_string(power);
    }
  }
  return out;
}

double evaluate_polynomial(const Polynomial& p, std::span<const double> flat) {
  double acc = 0.0;
  for (const auto& term : p) {
    double v = term.coefficient;
    for (const auto& [index, power] : term.powers) {
      if (index >= flat.size()) {
        throw StructuralError("polynomial variable x" + std::to_string(index) +
                              " out of range");
      }
      v *= std::pow(flat[index], static_cast<double>(power));
    }
    acc += v;
  }
  return acc;
}

PartiallyMonotoneSystem polynomial_system(MonotoneSignature signature,
                                          std::vector<Polynomial> polys,
                                          const DimensionProfile& profile,
                                          MetricProfile metric) {
  const auto off = offsets(profile);
  if (polys.size() != off.back()) {
    throw StructuralError("polynomial table has " +
                          std::to_string(polys.size()) + " rows, expected " +
                          std::to_string(off.back()));
  }
  for (const auto& poly : polys) {
    for (const auto& term : poly) {
      for (const auto& [index, power] : term.powers) {
        if (index >= off.back()) {
          throw StructuralError("polynomial variable x" +
                                std::to_string(index) + " out of range");
        }
      }
    }
  }
  auto shared = std::make_shared<const std::vector<Polynomial>>(std::move(polys));
  std::vector<ComponentMap> ops;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    ops.push_back([shared, lo = off[i], hi = off[i + 1]](const ProductPoint& x) {
      const Vector flat = x.flatten();
      Vector out(hi - lo);
      for (std::size_t r = lo; r < hi; ++r) {
        out[r - lo] = evaluate_polynomial((*shared)[r], flat);
      }
      return out;
    });
  }
  return PartiallyMonotoneSystem(std::move(signature), std::move(ops), profile,
                                 std::move(metric));
}

// ---------------------------------------------------------------------------
// Registry

namespace {

double scalar(const ProductPoint& p, std::size_t j) { return p[j][0]; }

PartiallyMonotoneSystem paper_example() {
  std::vector<ComponentMap> ops = {
      [](const ProductPoint& p) {
        return Vector{0.4 * std::atan(scalar(p, 0)) + 0.2 * scalar(p, 1) -
                      0.2 * std::tanh(scalar(p, 2)) + 1.0};
      },
      [](const ProductPoint& p) {
        return Vector{-0.3 * scalar(p, 0) + 0.3 * std::atan(scalar(p, 1)) +
                      0.3 * scalar(p, 2) - 0.5};
      },
      [](const ProductPoint& p) {
        return Vector{-0.25 * scalar(p, 0) - 0.25 * std::tanh(scalar(p, 1)) -
                      0.3 * scalar(p, 2) + 0.25};
      },
  };
  return PartiallyMonotoneSystem(MonotoneSignature::parse("++-/-++/---"),
                                 std::move(ops), DimensionProfile{1, 1, 1});
}

PartiallyMonotoneSystem noncontraction() {
  std::vector<ComponentMap> ops = {
      [](const ProductPoint& p) { return Vector{2.0 * scalar(p, 0)}; },
      [](const ProductPoint& p) { return Vector{0.5 * scalar(p, 1)}; },
  };
  return PartiallyMonotoneSystem(MonotoneSignature::parse("++/++"),
                                 std::move(ops), DimensionProfile{1, 1});
}

TripledProblem tripled_cubic_problem() {
  TripledProblem p;
  p.F = [](const Vector& x, const Vector& y, const Vector& z) {
    return Vector{0.2 * x[0] + 0.1 * x[0] * x[0] * x[0] - 0.2 * y[0] +
                  0.1 * z[0] + 0.3};
  };
  p.dimension = 1;
  p.phi = ComparisonFunction::linear(0.8);
  return p;
}

TripledProblem tripled_affine_problem() {
  TripledProblem p;
  p.F = [](const Vector& x, const Vector& y, const Vector& z) {
    return Vector{(x[0] - y[0] + z[0]) / 4.0};
  };
  p.dimension = 1;
  p.phi = ComparisonFunction::linear(0.75);
  return p;
}

}  // namespace

const std::vector<RegisteredSystem>& system_registry() {
  static const std::vector<RegisteredSystem> registry = {
      {"paper_example",
       "order-3 scalar system with signature ++-/-++/--- (smooth, "
       "contraction factor 0.9 in the sup metric)",
       MonotoneSignature::parse("++-/-++/---"), DimensionProfile{1, 1, 1},
       ComparisonFunction::linear(0.9), paper_example},
      {"noncontraction",
       "T_1 = 2 x_1, T_2 = x_2 / 2: violates the contraction condition",
       MonotoneSignature::parse("++/++"), DimensionProfile{1, 1},
       ComparisonFunction::linear(0.9), noncontraction},
      {"tripled_cubic",
       "tripled system with F(x,y,z) = 0.2x + 0.1x^3 - 0.2y + 0.1z + 0.3",
       tripled_signature(), DimensionProfile{1, 1, 1},
       ComparisonFunction::linear(0.8),
       [] { return tripled_to_system(tripled_cubic_problem()); }},
      {"tripled_affine", "tripled system with F(x,y,z) = (x - y + z) / 4",
       tripled_signature(), DimensionProfile{1, 1, 1},
       ComparisonFunction::linear(0.75),
       [] { return tripled_to_system(tripled_affine_problem()); }},
  };
  return registry;
}

const RegisteredSystem& find_system(std::string_view name) {
  for (const auto& entry : system_registry()) {
    if (entry.name == name) return entry;
  }
  throw ConfigError("unknown operator '" + std::string(name) + "'");
}

const std::vector<RegisteredRhs>& rhs_registry() {
  static const std::vector<RegisteredRhs> registry = {
      {"relaxation", "f(t,x,y,z) = -lambda x + lambda c; solution x=y=z=c",
       ParameterMap{{"c", 1.0}}, 1.0, ComparisonFunction::linear(0.5),
       [](const ParameterMap& params, double lambda, double) -> RightHandSide {
         const double c = params.at("c");
         return [lambda, c](double, double x, double, double) {
           return -lambda * x + lambda * c;
         };
       }},
      {"forced_arctan",
       "f(t,x,y,z) = -x + epsilon sin(atan z - atan y) + beta atan x + "
       "amplitude cos(2 pi t / T)",
       ParameterMap{{"epsilon", 0.1}, {"beta", 0.5}, {"amplitude", 1.0}}, 1.0,
       ComparisonFunction::linear(0.7),
       [](const ParameterMap& params, double, double period) -> RightHandSide {
         const double eps = params.at("epsilon");
         const double beta = params.at("beta");
         const double amp = params.at("amplitude");
         const double omega = 2.0 * std::numbers::pi / period;
         return [eps, beta, amp, omega](double t, double x, double y, double z) {
           return -x + eps * std::sin(std::atan(z) - std::atan(y)) +
                  beta * std::atan(x) + amp * std::cos(omega * t);
         };
       }},
  };
  return registry;
}

const RegisteredRhs& find_rhs(std::string_view name) {
  for (const auto& entry : rhs_registry()) {
    if (entry.name == name) return entry;
  }
  throw ConfigError("unknown right-hand side '" + std::string(name) + "'");
}

}  // namespace mfix
