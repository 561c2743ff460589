#pragma once

// Dirichlet problems for the graph translator equation
//   (1+u2^2) u11 - 2 u1 u2 u12 + (1+u1^2) u22 = 1 + u1^2 + u2^2
// on rectangles: full Newton with backtracking, and explicit pseudo-time relaxation
// u_t = F(u) / W^2 used to manufacture initial guesses.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "tlab/discrete_geometry.hpp"
#include "tlab/errors.hpp"
#include "tlab/grid.hpp"
#include "tlab/soliton_forms.hpp"

namespace tlab {

enum class LinearSolver { Auto, Direct, Iterative };

struct SolveConfig {
  double tol = 1e-10;
  std::size_t max_newton_iters = 50;
  double damping = 1.0;
  double relax_dt = 1e-4;
  std::size_t max_relax_steps = 200000;
  LinearSolver linear_solver = LinearSolver::Auto;

  void validate() const {
    if (!(tol > 0.0)) throw ArgumentError("solver tol must be positive");
    if (!(damping > 0.0 && damping <= 1.0)) throw ArgumentError("damping must lie in (0, 1]");
    if (!(relax_dt > 0.0)) throw ArgumentError("relax_dt must be positive");
  }
};

struct SolveOutcome {
  GridFunction solution;
  double final_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;
  std::string diagnostic;
};

/// Dirichlet values on the outer ring of a grid. South/north have nx entries
/// (i increasing), west/east have ny entries (j increasing).
struct DirichletData {
  GridSpec spec;
  std::vector<double> south, north, west, east;

  template <class Surface>
  static DirichletData from_surface(const Surface& surface, const GridSpec& spec) {
    DirichletData d{spec, {}, {}, {}, {}};
    const auto nx = spec.nx(), ny = spec.ny();
    d.south.resize(nx);
    d.north.resize(nx);
    d.west.resize(ny);
    d.east.resize(ny);
    for (std::size_t i = 0; i < nx; ++i) {
      d.south[i] = surface(spec.x1(i), spec.x2(0));
      d.north[i] = surface(spec.x1(i), spec.x2(ny - 1));
    }
    for (std::size_t j = 0; j < ny; ++j) {
      d.west[j] = surface(spec.x1(0), spec.x2(j));
      d.east[j] = surface(spec.x1(nx - 1), spec.x2(j));
    }
    return d;
  }

  static DirichletData from_grid(const GridFunction& u) {
    return from_surface(
        [&u](double x1, double x2) {
          const GridSpec& s = u.spec();
          const auto i = static_cast<std::size_t>(std::lround((x1 - s.domain().x1_min) / s.h1()));
          const auto j = static_cast<std::size_t>(std::lround((x2 - s.domain().x2_min) / s.h2()));
          return u(i, j);
        },
        u.spec());
  }

  /// Overwrites the outer ring of `u` with this data.
  void impose(GridFunction& u) const {
    if (!(u.spec() == spec)) throw ArgumentError("boundary data and grid have different layouts");
    const auto nx = spec.nx(), ny = spec.ny();
    for (std::size_t i = 0; i < nx; ++i) {
      u(i, 0) = south[i];
      u(i, ny - 1) = north[i];
    }
    for (std::size_t j = 0; j < ny; ++j) {
      u(0, j) = west[j];
      u(nx - 1, j) = east[j];
    }
  }
};

/// Coons-patch (bilinearly blended) fill of the interior from the boundary ring.
inline GridFunction transfinite_fill(const DirichletData& bc) {
  const GridSpec& s = bc.spec;
  GridFunction u(s);
  const auto nx = s.nx(), ny = s.ny();
  for (std::size_t j = 0; j < ny; ++j) {
    const double eta = static_cast<double>(j) / static_cast<double>(ny - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      const double xi = static_cast<double>(i) / static_cast<double>(nx - 1);
      const double lr = (1 - xi) * bc.west[j] + xi * bc.east[j];
      const double bt = (1 - eta) * bc.south[i] + eta * bc.north[i];
      const double corners = (1 - xi) * (1 - eta) * bc.south[0] + xi * (1 - eta) * bc.south[nx - 1] +
                             (1 - xi) * eta * bc.north[0] + xi * eta * bc.north[nx - 1];
      u(i, j) = lr + bt - corners;
    }
  }
  bc.impose(u);
  return u;
}

namespace detail {

inline void check_problem(const Rect& domain, const DirichletData& bc, const GridFunction& init) {
  const GridSpec& s = init.spec();
  if (!(s.domain() == domain)) throw ArgumentError("initial grid does not cover the requested domain");
  if (!(bc.spec == s)) throw ArgumentError("boundary data layout differs from the initial grid");
  if (s.nx() < 5 || s.ny() < 5) throw ArgumentError("translator solves need a grid of at least 5x5 nodes");
  if (bc.south.size() != s.nx() || bc.north.size() != s.nx() || bc.west.size() != s.ny() ||
      bc.east.size() != s.ny()) {
    throw ArgumentError("boundary data has the wrong number of values");
  }
}

inline std::size_t unknown_index(const GridSpec& s, std::size_t i, std::size_t j) {
  return (j - 1) * (s.nx() - 2) + (i - 1);
}

/// Max-norm of the translator residual over interior nodes.
inline double residual_norm(const GridFunction& u) {
  return max_abs(translator_residual(u)).value;
}

inline Eigen::SparseMatrix<double> assemble_jacobian(const GridFunction& u) {
  const GridSpec& s = u.spec();
  const double h1 = s.h1(), h2 = s.h2();
  const auto n = (s.nx() - 2) * (s.ny() - 2);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * n);
  for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
      const double p = (u(i + 1, j) - u(i - 1, j)) / (2 * h1);
      const double q = (u(i, j + 1) - u(i, j - 1)) / (2 * h2);
      const double r = (u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (h1 * h1);
      const double t = (u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (h2 * h2);
      const double sxy =
          (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) / (4 * h1 * h2);
      // Partial derivatives of F(p, q, r, s, t).
      const double Fp = -2 * q * sxy + 2 * p * t - 2 * p;
      const double Fq = 2 * q * r - 2 * p * sxy - 2 * q;
      const double Fr = 1 + q * q;
      const double Fs = -2 * p * q;
      const double Ft = 1 + p * p;

      const auto row = static_cast<int>(unknown_index(s, i, j));
      auto add = [&](std::size_t ii, std::size_t jj, double v) {
        if (v == 0.0 || s.on_boundary(ii, jj)) return;
        trip.emplace_back(row, static_cast<int>(unknown_index(s, ii, jj)), v);
      };
      add(i, j, -2 * Fr / (h1 * h1) - 2 * Ft / (h2 * h2));
      add(i + 1, j, Fp / (2 * h1) + Fr / (h1 * h1));
      add(i - 1, j, -Fp / (2 * h1) + Fr / (h1 * h1));
      add(i, j + 1, Fq / (2 * h2) + Ft / (h2 * h2));
      add(i, j - 1, -Fq / (2 * h2) + Ft / (h2 * h2));
      const double c = Fs / (4 * h1 * h2);
      add(i + 1, j + 1, c);
      add(i - 1, j - 1, c);
      add(i + 1, j - 1, -c);
      add(i - 1, j + 1, -c);
    }
  }
  Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

inline Eigen::VectorXd interior_residual(const GridFunction& u) {
  const GridSpec& s = u.spec();
  const NodeField res = translator_residual(u);
  Eigen::VectorXd F((s.nx() - 2) * (s.ny() - 2));
  for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) F[static_cast<Eigen::Index>(unknown_index(s, i, j))] = res(i, j);
  }
  return F;
}

// Returns false when the linear system could not be solved.
inline bool solve_linear(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs, LinearSolver kind,
                         const GridSpec& s, Eigen::VectorXd& x) {
  const bool direct =
      kind == LinearSolver::Direct || (kind == LinearSolver::Auto && s.nx() <= 300 && s.ny() <= 300);
  if (direct) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(J);
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return false;
    x = lu.solve(rhs);
    return lu.info() == Eigen::Success && x.allFinite();
  }
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
  it.preconditioner().setDroptol(1e-6);
  it.preconditioner().setFillfactor(20);
  it.setTolerance(1e-12);
  it.setMaxIterations(5000);
  it.compute(J);
  if (it.info() != Eigen::Success) return false;
  x = it.solve(rhs);
  return it.info() == Eigen::Success && x.allFinite();
}

// Smooth interior bump of amplitude `amp`; vanishes on the boundary ring.
inline void perturb_smooth(GridFunction& u, double amp) {
  const GridSpec& s = u.spec();
  for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
    const double eta = static_cast<double>(j) / static_cast<double>(s.ny() - 1);
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
      const double xi = static_cast<double>(i) / static_cast<double>(s.nx() - 1);
      u(i, j) += amp * std::sin(std::numbers::pi * xi) * std::sin(std::numbers::pi * eta);
    }
  }
}

}  // namespace detail

/// Damped Newton on the discrete translator system with Dirichlet data. The boundary
/// ring of `init` is overwritten by `bc`. Non-convergence is reported in the outcome;
/// a Jacobian that stays singular after one 1e-8 perturbation of the starting iterate
/// throws SolverError.
inline SolveOutcome newton_solve(const Rect& domain, const DirichletData& bc, GridFunction init,
                                 const SolveConfig& cfg) {
  cfg.validate();
  detail::check_problem(domain, bc, init);
  bc.impose(init);

  SolveOutcome out;
  GridFunction u = std::move(init);
  const GridSpec& s = u.spec();
  Eigen::VectorXd F = detail::interior_residual(u);
  double norm = F.lpNorm<Eigen::Infinity>();
  out.history.push_back(norm);
  bool perturbed = false;

  std::size_t k = 0;
  while (k < cfg.max_newton_iters && norm > cfg.tol) {
    const Eigen::SparseMatrix<double> J = detail::assemble_jacobian(u);
    Eigen::VectorXd delta;
    if (!detail::solve_linear(J, -F, cfg.linear_solver, s, delta)) {
      if (k == 0 && !perturbed) {
        perturbed = true;
        detail::perturb_smooth(u, 1e-8);
        F = detail::interior_residual(u);
        norm = F.lpNorm<Eigen::Infinity>();
        out.history.back() = norm;
        out.diagnostic = "singular Jacobian at the initial iterate; perturbed once by 1e-8";
        continue;
      }
      throw SolverError("singular Jacobian at Newton iterate " + std::to_string(k) + " (residual " +
                        std::to_string(norm) + ")");
    }

    double step = cfg.damping;
    bool accepted = false;
    GridFunction trial = u;
    Eigen::VectorXd Ft;
    double trial_norm = norm;
    for (int halvings = 0; halvings < 40; ++halvings, step *= 0.5) {
      for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
        for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
          trial(i, j) = u(i, j) + step * delta[static_cast<Eigen::Index>(detail::unknown_index(s, i, j))];
        }
      }
      Ft = detail::interior_residual(trial);
      trial_norm = Ft.lpNorm<Eigen::Infinity>();
      if (std::isfinite(trial_norm) && trial_norm < norm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.diagnostic = "line search stalled at iteration " + std::to_string(k) + " with residual " +
                       std::to_string(norm);
      break;
    }
    u = std::move(trial);
    F = std::move(Ft);
    norm = trial_norm;
    out.history.push_back(norm);
    ++k;
  }

  out.iterations = k;
  out.final_residual = norm;
  out.converged = norm <= cfg.tol;
  if (!out.converged && out.diagnostic.empty()) {
    out.diagnostic = "no convergence within " + std::to_string(cfg.max_newton_iters) + " Newton iterations";
  }
  out.solution = std::move(u);
  return out;
}

/// Explicit pseudo-time stepping u <- u + dt F(u)/W^2 at interior nodes until the
/// residual max-norm reaches cfg.tol. Fifty consecutive residual increases (or a
/// non-finite residual) stop the run as unstable.
inline SolveOutcome parabolic_relax(GridFunction init, const DirichletData& bc, const SolveConfig& cfg) {
  cfg.validate();
  detail::check_problem(init.spec().domain(), bc, init);
  bc.impose(init);

  SolveOutcome out;
  GridFunction u = std::move(init);
  const GridSpec& s = u.spec();
  const double dt = cfg.relax_dt;
  const double h1 = s.h1(), h2 = s.h2();

  NodeField res = translator_residual(u);
  double norm = max_abs(res).value;
  out.history.push_back(norm);
  std::size_t growth = 0;
  std::size_t k = 0;
  while (k < cfg.max_relax_steps && norm > cfg.tol) {
    for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
      for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
        const double p = (u(i + 1, j) - u(i - 1, j)) / (2 * h1);
        const double q = (u(i, j + 1) - u(i, j - 1)) / (2 * h2);
        res(i, j) /= 1.0 + p * p + q * q;
      }
    }
    for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
      for (std::size_t i = 1; i + 1 < s.nx(); ++i) u(i, j) += dt * res(i, j);
    }
    ++k;
    res = translator_residual(u);
    const double next = max_abs(res).value;
    growth = next > norm ? growth + 1 : 0;
    norm = next;
    out.history.push_back(norm);
    if (!std::isfinite(norm) || growth >= 50) {
      out.diagnostic = "relaxation unstable at step " + std::to_string(k) + " (dt = " + std::to_string(dt) +
                       ", stability bound ~ " + std::to_string(std::min(h1, h2) * std::min(h1, h2) / 4) + ")";
      break;
    }
  }
  out.iterations = k;
  out.final_residual = norm;
  out.converged = std::isfinite(norm) && norm <= cfg.tol;
  if (!out.converged && out.diagnostic.empty()) {
    out.diagnostic = "relaxation budget of " + std::to_string(cfg.max_relax_steps) + " steps exhausted";
  }
  out.solution = std::move(u);
  return out;
}

/// Dirichlet data for truncated strip solves:
///   g(x1, x2) = lambda^2 log sec(x1/lambda) + sqrt(L^2 x2^2 + s^2)
/// on [-R+eps, R-eps] x [-Y, Y], even in both variables and asymptotically tilted by +-L.
class StripBoundary {
 public:
  StripBoundary(SolitonParams p, double epsilon, double Y, double smoothing)
      : p_(p), eps_(epsilon), Y_(Y), smoothing_(smoothing) {
    if (!(epsilon > 0.0) || !(epsilon < p.R())) {
      throw ArgumentError("strip margin epsilon must lie in (0, R), got " + std::to_string(epsilon));
    }
    if (epsilon < 0.1 * p.R()) {
      throw ArgumentError("strip margin epsilon must be at least 0.1 R to keep W bounded");
    }
    if (!(Y > 0.0)) throw ArgumentError("strip half-height Y must be positive");
    if (!(smoothing > 0.0)) throw ArgumentError("strip smoothing must be positive");
  }

  double operator()(double x1, double x2) const {
    const double lam = p_.lambda();
    const double L = p_.L();
    return lam * lam * detail::log_sec(x1 / lam) + std::sqrt(L * L * x2 * x2 + smoothing_ * smoothing_);
  }

  [[nodiscard]] Rect rect() const noexcept { return {-(p_.R() - eps_), p_.R() - eps_, -Y_, Y_}; }
  [[nodiscard]] const SolitonParams& params() const noexcept { return p_; }
  [[nodiscard]] double epsilon() const noexcept { return eps_; }
  [[nodiscard]] double Y() const noexcept { return Y_; }
  [[nodiscard]] double smoothing() const noexcept { return smoothing_; }

 private:
  SolitonParams p_;
  double eps_, Y_, smoothing_;
};

inline StripBoundary strip_boundary_data(const SolitonParams& p, double epsilon, double Y, double smoothing) {
  return StripBoundary(p, epsilon, Y, smoothing);
}

/// Doubles the resolution (2n-1 nodes per direction) with 4-point cubic midpoint
/// interpolation, one-sided next to the edges. Needs at least 4 nodes per direction.
inline GridFunction prolong_cubic(const GridFunction& u) {
  const GridSpec& s = u.spec();
  if (s.nx() < 4 || s.ny() < 4) throw ArgumentError("cubic prolongation needs at least 4 nodes per direction");
  auto refine_line = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> out(2 * n - 1);
    for (std::size_t k = 0; k < n; ++k) out[2 * k] = v[k];
    for (std::size_t k = 0; k + 1 < n; ++k) {
      double m;
      if (k == 0) {
        m = (5 * v[0] + 15 * v[1] - 5 * v[2] + v[3]) / 16;
      } else if (k + 2 == n) {
        m = (5 * v[n - 1] + 15 * v[n - 2] - 5 * v[n - 3] + v[n - 4]) / 16;
      } else {
        m = (-v[k - 1] + 9 * v[k] + 9 * v[k + 1] - v[k + 2]) / 16;
      }
      out[2 * k + 1] = m;
    }
    return out;
  };
  const std::size_t nx = s.nx(), ny = s.ny(), fx = 2 * nx - 1, fy = 2 * ny - 1;
  std::vector<std::vector<double>> rows(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    std::vector<double> line(nx);
    for (std::size_t i = 0; i < nx; ++i) line[i] = u(i, j);
    rows[j] = refine_line(line);
  }
  GridFunction fine(GridSpec(s.domain(), fx, fy));
  for (std::size_t i = 0; i < fx; ++i) {
    std::vector<double> col(ny);
    for (std::size_t j = 0; j < ny; ++j) col[j] = rows[j][i];
    const auto refined = refine_line(col);
    for (std::size_t j = 0; j < fy; ++j) fine(i, j) = refined[j];
  }
  return fine;
}

}  // namespace tlab
