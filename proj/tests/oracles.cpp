#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>

namespace oracle {

using mfix::Monotonicity;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

MonotoneSignature random_signature(Rng& rng, std::size_t n) {
  std::vector<Monotonicity> entries(n * n);
  for (auto& e : entries) {
    e = (rng() & 1) ? Monotonicity::Decreasing : Monotonicity::Increasing;
  }
  return MonotoneSignature(n, std::move(entries));
}

DimensionProfile random_profile(Rng& rng, std::size_t n, std::size_t max_m) {
  DimensionProfile p(n);
  for (auto& m : p) m = uniform_index(rng, 1, max_m);
  return p;
}

ProductPoint random_point(Rng& rng, const DimensionProfile& profile, double lo,
                          double hi) {
  std::vector<Vector> comps;
  for (auto m : profile) {
    Vector c(m);
    for (auto& v : c) v = uniform(rng, lo, hi);
    comps.push_back(std::move(c));
  }
  return ProductPoint(std::move(comps));
}

ProductPoint coarse_point(Rng& rng, const DimensionProfile& profile) {
  std::vector<Vector> comps;
  for (auto m : profile) {
    Vector c(m);
    for (auto& v : c) v = static_cast<double>(uniform_index(rng, 0, 2)) - 1.0;
    comps.push_back(std::move(c));
  }
  return ProductPoint(std::move(comps));
}

namespace {

ProductPoint shifted(Rng& rng, const ProductPoint& x, double sign) {
  std::vector<Vector> comps = x.components();
  for (auto& c : comps) {
    for (auto& v : c) {
      if (rng() % 3 != 0) v += sign * uniform(rng, 0.0, 2.0);
    }
  }
  return ProductPoint(std::move(comps));
}

using Scalar = double (*)(double);

double identity_half(double t) { return 0.5 * t; }
double tanh_fn(double t) { return std::tanh(t); }
double atan_fn(double t) { return std::atan(t); }

}  // namespace

ProductPoint shifted_up(Rng& rng, const ProductPoint& x) {
  return shifted(rng, x, 1.0);
}

ProductPoint shifted_down(Rng& rng, const ProductPoint& x) {
  return shifted(rng, x, -1.0);
}

mfix::PartiallyMonotoneSystem random_monotone_system(
    Rng& rng, const MonotoneSignature& signature,
    const DimensionProfile& profile, double row_budget) {
  const std::size_t n = profile.size();
  static constexpr Scalar kShapes[] = {identity_half, tanh_fn, atan_fn};
  std::vector<Scalar> shapes(n);
  for (auto& g : shapes) g = kShapes[uniform_index(rng, 0, 2)];

  std::vector<mfix::ComponentMap> ops;
  for (std::size_t i = 0; i < n; ++i) {
    // weights[k][j][l]
    auto weights = std::make_shared<std::vector<std::vector<Vector>>>();
    auto offsets = std::make_shared<Vector>(profile[i]);
    for (std::size_t k = 0; k < profile[i]; ++k) {
      (*offsets)[k] = uniform(rng, -1.0, 1.0);
      std::vector<Vector> per_var;
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        Vector w(profile[j]);
        for (auto& a : w) {
          a = uniform(rng, 0.0, 0.3);
          total += a;
        }
        per_var.push_back(std::move(w));
      }
      if (row_budget > 0.0 && total > row_budget) {
        for (auto& w : per_var)
          for (auto& a : w) a *= row_budget / total;
      }
      weights->push_back(std::move(per_var));
    }
    std::vector<double> signs(n);
    for (std::size_t j = 0; j < n; ++j) {
      signs[j] = signature(i, j) == Monotonicity::Increasing ? 1.0 : -1.0;
    }
    ops.push_back([weights, offsets, signs, shapes](const ProductPoint& x) {
      Vector out(*offsets);
      for (std::size_t k = 0; k < out.size(); ++k) {
        for (std::size_t j = 0; j < signs.size(); ++j) {
          for (std::size_t l = 0; l < x[j].size(); ++l) {
            out[k] += signs[j] * ((*weights)[k][j][l] * shapes[j](x[j][l]));
          }
        }
      }
      return out;
    });
  }
  return mfix::PartiallyMonotoneSystem(signature, std::move(ops), profile);
}

AffineInstance random_affine(Rng& rng, std::size_t n, double row_sum) {
  AffineInstance inst{{}, {}, random_signature(rng, n), random_profile(rng, n)};
  std::vector<std::size_t> owner;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < inst.profile[j]; ++k) owner.push_back(j);
  }
  const std::size_t d = owner.size();
  inst.M.assign(d, Vector(d, 0.0));
  inst.c.resize(d);
  for (std::size_t r = 0; r < d; ++r) {
    Vector raw(d);
    double total = 0.0;
    for (auto& a : raw) {
      a = uniform(rng, 0.0, 1.0);
      total += a;
    }
    const double target = uniform(rng, 0.1, row_sum);
    for (std::size_t col = 0; col < d; ++col) {
      const bool neg =
          inst.signature(owner[r], owner[col]) == Monotonicity::Decreasing;
      inst.M[r][col] = (neg ? -1.0 : 1.0) * raw[col] * target / total;
    }
    inst.c[r] = uniform(rng, -5.0, 5.0);
  }
  return inst;
}

Vector affine_fixed_point(const Matrix& M, const Vector& c) {
  const auto d = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd b(d);
  for (Eigen::Index r = 0; r < d; ++r) {
    b(r) = c[static_cast<std::size_t>(r)];
    for (Eigen::Index k = 0; k < d; ++k) {
      A(r, k) -= M[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
    }
  }
  const Eigen::VectorXd x = A.partialPivLu().solve(b);
  return Vector(x.data(), x.data() + d);
}

double abs_row_sum(const Matrix& M) {
  double best = 0.0;
  for (const auto& row : M) {
    double s = 0.0;
    for (double a : row) s += std::abs(a);
    best = std::max(best, s);
  }
  return best;
}

std::vector<Vector> picard_trajectory(
    const std::function<Vector(const Vector&)>& T, Vector x0,
    std::size_t steps) {
  std::vector<Vector> out{x0};
  for (std::size_t n = 0; n < steps; ++n) out.push_back(T(out.back()));
  return out;
}

namespace {

Eigen::VectorXd tripled_residual(const mfix::TripledMap& F, std::size_t m,
                                 const Eigen::VectorXd& w) {
  const auto part = [&](std::size_t b) {
    return Vector(w.data() + b * m, w.data() + (b + 1) * m);
  };
  const Vector x = part(0), y = part(1), z = part(2);
  const Vector fx = F(x, y, z), fy = F(y, x, z), fz = F(z, y, x);
  Eigen::VectorXd r(3 * m);
  for (std::size_t k = 0; k < m; ++k) {
    r(k) = x[k] - fx[k];
    r(m + k) = y[k] - fy[k];
    r(2 * m + k) = z[k] - fz[k];
  }
  return r;
}

}  // namespace

std::optional<std::array<Vector, 3>> tripled_newton(const mfix::TripledMap& F,
                                                    std::size_t m, double tol) {
  const auto d = static_cast<Eigen::Index>(3 * m);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd r = tripled_residual(F, m, w);
  for (int it = 0; it < 100 && r.lpNorm<Eigen::Infinity>() > tol; ++it) {
    Eigen::MatrixXd J(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(w(k)));
      Eigen::VectorXd wp = w, wm = w;
      wp(k) += h;
      wm(k) -= h;
      J.col(k) = (tripled_residual(F, m, wp) - tripled_residual(F, m, wm)) /
                 (2.0 * h);
    }
    const Eigen::VectorXd step = J.partialPivLu().solve(-r);
    double t = 1.0;
    Eigen::VectorXd trial = w + step;
    Eigen::VectorXd rt = tripled_residual(F, m, trial);
    while (rt.lpNorm<Eigen::Infinity>() > (1.0 - 1e-4 * t) * r.lpNorm<Eigen::Infinity>() &&
           t > 1e-6) {
      t *= 0.5;
      trial = w + t * step;
      rt = tripled_residual(F, m, trial);
    }
    w = trial;
    r = rt;
  }
  if (!(r.lpNorm<Eigen::Infinity>() <= tol)) return std::nullopt;
  std::array<Vector, 3> out;
  for (std::size_t b = 0; b < 3; ++b) {
    out[b] = Vector(w.data() + b * m, w.data() + (b + 1) * m);
  }
  return out;
}

std::optional<std::vector<int>> brute_force_witness(
    const MonotoneSignature& signature) {
  const std::size_t n = signature.order();
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    std::vector<int> eps(n);
    for (std::size_t i = 0; i < n; ++i) eps[i] = (mask >> i) & 1 ? -1 : 1;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = 0; j < n && ok; ++j) {
        const int s = signature(i, j) == Monotonicity::Increasing ? 1 : -1;
        ok = s == eps[i] * eps[j];
      }
    }
    if (ok) return eps;
  }
  return std::nullopt;
}

namespace {

using State = Eigen::Vector3d;

State ode_rhs(const mfix::RightHandSide& f, double t, const State& s) {
  return {f(t, s(0), s(1), s(2)), f(t, s(1), s(0), s(2)),
          f(t, s(2), s(1), s(0))};
}

// Integrates over one period; nodes (optional) receives the state at every
// grid node including both ends.
State flow(const mfix::RightHandSide& f, double period, std::size_t cells,
           std::size_t substeps, State s, std::vector<State>* nodes) {
  const double h = period / static_cast<double>(cells * substeps);
  if (nodes) nodes->push_back(s);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t q = 0; q < substeps; ++q) {
      const double t = static_cast<double>(c * substeps + q) * h;
      const State k1 = ode_rhs(f, t, s);
      const State k2 = ode_rhs(f, t + 0.5 * h, s + 0.5 * h * k1);
      const State k3 = ode_rhs(f, t + 0.5 * h, s + 0.5 * h * k2);
      const State k4 = ode_rhs(f, t + h, s + h * k3);
      s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (nodes) nodes->push_back(s);
  }
  return s;
}

}  // namespace

std::optional<std::array<Vector, 3>> periodic_shooting(
    const mfix::RightHandSide& f, double period, std::size_t grid_size,
    std::size_t substeps) {
  const std::size_t cells = grid_size - 1;
  State p = State::Zero();
  auto G = [&](const State& q) {
    return State(flow(f, period, cells, substeps, q, nullptr) - q);
  };
  State g = G(p);
  for (int it = 0; it < 50 && g.lpNorm<Eigen::Infinity>() > 1e-14; ++it) {
    Eigen::Matrix3d J;
    for (int k = 0; k < 3; ++k) {
      State qp = p, qm = p;
      qp(k) += 1e-6;
      qm(k) -= 1e-6;
      J.col(k) = (G(qp) - G(qm)) / 2e-6;
    }
    p -= J.partialPivLu().solve(g);
    g = G(p);
  }
  if (!(g.lpNorm<Eigen::Infinity>() <= 1e-12)) return std::nullopt;
  std::vector<State> nodes;
  flow(f, period, cells, substeps, p, &nodes);
  std::array<Vector, 3> out;
  for (int b = 0; b < 3; ++b) {
    out[b].resize(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) out[b][k] = nodes[k](b);
  }
  return out;
}

TripledInstance random_tripled(Rng& rng, std::size_t m, double lipschitz) {
  struct Coeffs {
    std::vector<Vector> a, b, c;
    Vector d;
  };
  auto co = std::make_shared<Coeffs>();
  for (std::size_t k = 0; k < m; ++k) {
    Vector a(m), b(m), c(m);
    double total = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      a[l] = uniform(rng, 0.0, 1.0);
      b[l] = uniform(rng, 0.0, 1.0);
      c[l] = uniform(rng, 0.0, 1.0);
      total += a[l] + b[l] + c[l];
    }
    const double scale = uniform(rng, 0.5, 1.0) * lipschitz / total;
    for (std::size_t l = 0; l < m; ++l) {
      a[l] *= scale;
      b[l] *= scale;
      c[l] *= scale;
    }
    co->a.push_back(a);
    co->b.push_back(b);
    co->c.push_back(c);
    co->d.push_back(uniform(rng, -1.0, 1.0));
  }
  mfix::TripledMap F = [co](const Vector& x, const Vector& y, const Vector& z) {
    Vector out(co->d);
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (std::size_t l = 0; l < x.size(); ++l) {
        out[k] += co->a[k][l] * std::atan(x[l]) -
                  co->b[k][l] * std::tanh(y[l]) + co->c[k][l] * z[l];
      }
    }
    return out;
  };
  return {F, m, lipschitz};
}

}  // namespace oracle
