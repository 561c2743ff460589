#pragma once

// Pass/fail certification of translator properties on a sampled graph: convexity,
// curvature and gradient bounds, the Harnack inequality for H, translator identities,
// strip asymptotics, reflection symmetry and the half-strip bound on W.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/discrete_geometry.hpp"
#include "tlab/errors.hpp"
#include "tlab/grid.hpp"
#include "tlab/soliton_forms.hpp"

namespace tlab {

struct CheckReport {
  std::string name;
  std::string statement_ref;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Node worst_location{};
  std::string notes;
};

namespace detail {

inline CheckReport make_report(std::string name, std::string ref, double worst, double tol, Node where,
                               std::string notes) {
  CheckReport r{std::move(name), std::move(ref), worst, tol, false, where, std::move(notes)};
  r.pass = !std::isnan(worst) && worst <= tol;
  return r;
}

// Running maximum with location; NaN wins so that garbage never passes.
struct Worst {
  double value = -std::numeric_limits<double>::infinity();
  Node where{};
  void offer(double v, Node at) {
    if (std::isnan(value)) return;
    if (std::isnan(v) || v > value) {
      value = v;
      where = at;
    }
  }
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline bool symmetric_in_x1(const GridSpec& s) {
  const Rect& d = s.domain();
  return std::abs(d.x1_min + d.x1_max) <= 1e-9 * (d.x1_max - d.x1_min);
}

}  // namespace detail

/// kappa2 >= -tol at every interior node.
inline CheckReport check_convexity(const GeometryFields& g, double tol) {
  detail::Worst worst;
  double max_pinch = 0.0;
  for (std::size_t j = 1; j + 1 < g.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < g.spec.nx(); ++i) {
      const NodeGeometry& n = g.at(i, j);
      worst.offer(-n.kappa2, {i, j});
      if (!std::isnan(n.pinch)) max_pinch = std::max(max_pinch, n.pinch);
    }
  }
  return detail::make_report("convexity", "mean convex translators are convex: kappa2 >= 0", worst.value, tol,
                             worst.where,
                             "min kappa2 = " + detail::fmt(-worst.value) +
                                 "; max pinching ratio G/F = " + detail::fmt(max_pinch));
}

/// H <= R - |x1| over the strip of half-width p.R().
inline CheckReport check_strip_H_bound(const GeometryFields& g, const SolitonParams& p, double tol) {
  detail::Worst worst;
  for (std::size_t j = 1; j + 1 < g.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < g.spec.nx(); ++i) {
      worst.offer(g.at(i, j).H - (p.R() - std::abs(g.spec.x1(i))), {i, j});
    }
  }
  return detail::make_report("strip_H_bound", "strip translators satisfy H <= R - |x1|", worst.value, tol,
                             worst.where, "min margin R - |x1| - H = " + detail::fmt(-worst.value));
}

/// Measured lower bound for H on |x1| <= R - eps; passes when min H >= 0 and reports it.
inline CheckReport check_H_positive(const GeometryFields& g, const SolitonParams& p, double eps) {
  detail::Worst worst;
  for (std::size_t j = 1; j + 1 < g.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < g.spec.nx(); ++i) {
      if (std::abs(g.spec.x1(i)) > p.R() - eps) continue;
      worst.offer(-g.at(i, j).H, {i, j});
    }
  }
  if (worst.value == -std::numeric_limits<double>::infinity()) {
    throw ArgumentError("no interior node satisfies |x1| <= R - eps");
  }
  return detail::make_report("H_positive", "H is bounded below by a positive constant on |x1| <= R - eps",
                             worst.value, 0.0, worst.where,
                             "measured min H = " + detail::fmt(-worst.value) + " on |x1| <= " +
                                 detail::fmt(p.R() - eps));
}

using NodePath = std::vector<Node>;

/// Random 4-connected monotone staircase paths between interior nodes. Deterministic in `seed`.
inline std::vector<NodePath> random_staircase_paths(const GridSpec& s, std::size_t count, std::uint64_t seed) {
  if (s.nx() < 3 || s.ny() < 3) throw ArgumentError("grid has no interior nodes");
  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng() % (hi - lo + 1)); };
  std::vector<NodePath> paths;
  paths.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Node a{pick(1, s.nx() - 2), pick(1, s.ny() - 2)};
    const Node b{pick(1, s.nx() - 2), pick(1, s.ny() - 2)};
    NodePath path{a};
    while (!(a == b)) {
      const bool move_i = a.i != b.i && (a.j == b.j || (rng() & 1U) != 0);
      if (move_i) {
        a.i = a.i < b.i ? a.i + 1 : a.i - 1;
      } else {
        a.j = a.j < b.j ? a.j + 1 : a.j - 1;
      }
      path.push_back(a);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

/// H(P2) >= exp(-l) H(P1) in both orientations, where l is the graph length of the path.
inline CheckReport check_harnack(const GridFunction& u, const GeometryFields& g, std::span<const NodePath> paths,
                                 double tol) {
  detail::Worst worst;
  for (const NodePath& path : paths) {
    if (path.empty()) throw ArgumentError("Harnack path is empty");
    for (const Node& n : {path.front(), path.back()}) {
      if (!g.spec.is_interior(n.i, n.j)) {
        throw ArgumentError("Harnack path endpoint (" + std::to_string(n.i) + ", " + std::to_string(n.j) +
                            ") is not an interior node");
      }
    }
    const double len = path_intrinsic_length(u, path);
    const double ha = g.at(path.front().i, path.front().j).H;
    const double hb = g.at(path.back().i, path.back().j).H;
    const double decay = std::exp(-len);
    worst.offer(decay * ha - hb, path.back());
    worst.offer(decay * hb - ha, path.front());
  }
  const double value = paths.empty() ? 0.0 : worst.value;
  return detail::make_report("harnack", "H(P2) >= exp(-d(P1, P2)) H(P1) along the surface", value, tol, worst.where,
                             std::to_string(paths.size()) + " paths, both orientations");
}

/// Derivative bounds for convex translators: |d/dx_i arctan u_i| <= 1, u_ii <= 1 + u_i^2,
/// |u12| <= sqrt(1+u1^2) sqrt(1+u2^2) and |d/dx2 sqrt(1+u1^2)| <= |u1| sqrt(1+u2^2).
inline CheckReport check_gradient_bounds(const Partials& d, double tol) {
  detail::Worst worst;
  double per_bound[4] = {-INFINITY, -INFINITY, -INFINITY, -INFINITY};
  for (std::size_t j = 1; j + 1 < d.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < d.spec.nx(); ++i) {
      const double p = d.u1(i, j), q = d.u2(i, j);
      const double r = d.u11(i, j), s = d.u12(i, j), t = d.u22(i, j);
      const double v[4] = {
          std::max(std::abs(r) / (1 + p * p), std::abs(t) / (1 + q * q)) - 1.0,
          std::max(r - (1 + p * p), t - (1 + q * q)),
          std::abs(s) - std::sqrt(1 + p * p) * std::sqrt(1 + q * q),
          std::abs(p * s) / std::sqrt(1 + p * p) - std::abs(p) * std::sqrt(1 + q * q),
      };
      for (int k = 0; k < 4; ++k) {
        per_bound[k] = std::max(per_bound[k], v[k]);
        worst.offer(v[k], {i, j});
      }
    }
  }
  return detail::make_report(
      "gradient_bounds", "convex translators: |d arctan u_i / dx_i| <= 1, u_ii <= 1 + u_i^2 and mixed bounds",
      worst.value, tol, worst.where,
      "arctan " + detail::fmt(per_bound[0]) + "; u_ii " + detail::fmt(per_bound[1]) + "; u12 " +
          detail::fmt(per_bound[2]) + "; mixed " + detail::fmt(per_bound[3]));
}

inline CheckReport check_gradient_bounds(const GridFunction& u, double tol) {
  return check_gradient_bounds(partials(u), tol);
}

/// Translator identities on a near-solution: tangential gradient of the height,
/// drift Laplacian of H, the W equation, and 2|A|^2 >= H^2 written as |A|^2 W^2 >= 1/2.
/// Throws ArgumentError when the translator residual exceeds 10 * solver_tol.
inline CheckReport check_soliton_identities(const GridFunction& u, const GeometryFields& g, double tol,
                                            double solver_tol) {
  const FieldExtreme res = max_abs(translator_residual(u));
  if (res.value > 10.0 * solver_tol) {
    throw ArgumentError("input is not a translator: residual " + detail::fmt(res.value) + " at node (" +
                        std::to_string(res.where.i) + ", " + std::to_string(res.where.j) + ") exceeds 10 x " +
                        detail::fmt(solver_tol));
  }
  const DriftResiduals drift = drift_identity_residuals(g);
  const FieldExtreme a = max_abs(drift.tangential, 1);
  const FieldExtreme b = max_abs(drift.drift_H, 2);
  const FieldExtreme c = max_abs(drift.drift_W, 2);
  detail::Worst ineq;
  for (std::size_t j = 1; j + 1 < g.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < g.spec.nx(); ++i) {
      const NodeGeometry& n = g.at(i, j);
      ineq.offer(0.5 - n.A2 * n.W * n.W, {i, j});
    }
  }
  detail::Worst worst;
  worst.offer(a.value, a.where);
  worst.offer(b.value, b.where);
  worst.offer(c.value, c.where);
  worst.offer(ineq.value, ineq.where);
  return detail::make_report("soliton_identities",
                             "translator identities: |grad u|^2 = 1 - H^2, drift Laplacian of H = -H|A|^2, "
                             "W equation = |A|^2 W >= 1/(2W)",
                             worst.value, tol, worst.where,
                             "tangential " + detail::fmt(a.value) + "; drift_H " + detail::fmt(b.value) + "; drift_W " +
                                 detail::fmt(c.value) + "; 1/2 - |A|^2 W^2 " + detail::fmt(ineq.value));
}

enum class StripEnd { Top, Bottom };

struct AsymptoticsOptions {
  double window = 5.0;
  double tol = 0.05;
  /// Columns with |x1| > R - eps_prime are skipped.
  double eps_prime = 0.0;
};

/// Near x2 = +-Y: u2 -> +-L, u1 -> lambda tan(x1/lambda) and u(x1, A) - u(0, A) -> lambda^2 log sec(x1/lambda),
/// over rows with |x2| in [Y - window, Y - 1].
inline CheckReport check_strip_asymptotics(const GridFunction& u, const SolitonParams& p, StripEnd end,
                                           const AsymptoticsOptions& opt) {
  const GridSpec& s = u.spec();
  const Rect& dom = s.domain();
  if (!(opt.window > 1.0) || opt.window > dom.x2_max - dom.x2_min) {
    throw ArgumentError("asymptotics window " + detail::fmt(opt.window) + " must exceed 1 and fit in the grid height " +
                        detail::fmt(dom.x2_max - dom.x2_min));
  }
  if (!(opt.eps_prime > 0.0) || opt.eps_prime >= p.R()) {
    throw ArgumentError("asymptotics margin eps_prime must lie in (0, R)");
  }
  const double x1_zero_pos = -dom.x1_min / s.h1();
  const auto i0 = static_cast<std::size_t>(std::lround(x1_zero_pos));
  if (std::abs(x1_zero_pos - static_cast<double>(i0)) > 1e-6 || i0 == 0 || i0 + 1 >= s.nx()) {
    throw ArgumentError("asymptotics check needs an interior grid column at x1 = 0");
  }
  const Partials d = partials(u);
  const double sign = end == StripEnd::Top ? 1.0 : -1.0;
  const double Y = end == StripEnd::Top ? dom.x2_max : -dom.x2_min;
  const double lam = p.lambda();

  detail::Worst slope, grad1, profile;
  std::size_t rows = 0;
  for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
    const double y = sign * s.x2(j);
    if (y < Y - opt.window || y > Y - 1.0) continue;
    ++rows;
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
      const double x1 = s.x1(i);
      if (std::abs(x1) > p.R() - opt.eps_prime) continue;
      slope.offer(std::abs(d.u2(i, j) - sign * p.L()), {i, j});
      grad1.offer(std::abs(d.u1(i, j) - lam * std::tan(x1 / lam)), {i, j});
      profile.offer(std::abs((u(i, j) - u(i0, j)) - lam * lam * detail::log_sec(x1 / lam)), {i, j});
    }
  }
  if (rows == 0) throw ArgumentError("asymptotics window selects no interior rows");
  detail::Worst worst;
  worst.offer(slope.value, slope.where);
  worst.offer(grad1.value, grad1.where);
  worst.offer(profile.value, profile.where);
  const std::string which = end == StripEnd::Top ? "top" : "bottom";
  return detail::make_report(
      "strip_asymptotics_" + which,
      end == StripEnd::Top ? "u_x2 -> L, u_x1 -> lambda tan(x1/lambda), profile -> grim cylinder as x2 -> +inf"
                           : "u_x2 -> -L, u_x1 -> lambda tan(x1/lambda), profile -> grim cylinder as x2 -> -inf",
      worst.value, opt.tol, worst.where,
      "|u_x2 - " + std::string(end == StripEnd::Top ? "" : "(-") + "L" + (end == StripEnd::Top ? "" : ")") + "| " +
          detail::fmt(slope.value) + "; |u_x1 - lambda tan| " + detail::fmt(grad1.value) + "; profile " +
          detail::fmt(profile.value) + "; " + std::to_string(rows) + " rows");
}

/// u_x2 nondecreasing in x2 along every column and confined to [-L - tol, L + tol].
inline CheckReport check_x2_monotonicity(const GridFunction& u, const SolitonParams& p, double tol) {
  const Partials d = partials(u);
  const GridSpec& s = d.spec;
  detail::Worst drop, range;
  for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
    for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
      range.offer(std::abs(d.u2(i, j)) - p.L(), {i, j});
      if (j + 2 < s.ny()) drop.offer(d.u2(i, j) - d.u2(i, j + 1), {i, j});
    }
  }
  detail::Worst worst;
  worst.offer(drop.value, drop.where);
  worst.offer(range.value, range.where);
  return detail::make_report("x2_monotonicity", "u_x2 increases in x2 between the limits -L and L", worst.value, tol,
                             worst.where,
                             "max decrease " + detail::fmt(drop.value) + "; max |u_x2| - L " + detail::fmt(range.value));
}

/// u(x1, x2) = u(-x1, x2) and u_x1 >= -tol for x1 > 0; the number of nodes with u_x1 <= 0 is reported.
inline CheckReport check_symmetry(const GridFunction& u, double tol) {
  const GridSpec& s = u.spec();
  if (!detail::symmetric_in_x1(s)) throw ArgumentError("symmetry check needs a grid symmetric about x1 = 0");
  detail::Worst mirror, sign;
  for (std::size_t j = 0; j < s.ny(); ++j) {
    for (std::size_t i = 0; i < s.nx(); ++i) mirror.offer(std::abs(u(i, j) - u(s.nx() - 1 - i, j)), {i, j});
  }
  const Partials d = partials(u);
  std::size_t nonpositive = 0;
  const double h1 = s.h1();
  for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
      if (!(s.x1(i) > 0.5 * h1)) continue;
      sign.offer(-d.u1(i, j), {i, j});
      if (d.u1(i, j) <= 0.0) ++nonpositive;
    }
  }
  detail::Worst worst;
  worst.offer(mirror.value, mirror.where);
  worst.offer(sign.value, sign.where);
  return detail::make_report("symmetry", "u is even in x1 and u_x1 > 0 for x1 > 0", worst.value, tol, worst.where,
                             "max |u(x1) - u(-x1)| " + detail::fmt(mirror.value) + "; min u_x1 on x1 > 0 " +
                                 detail::fmt(-sign.value) + "; nodes with u_x1 <= 0: " + std::to_string(nonpositive));
}

/// |A|^2 <= C everywhere; the observed maximum is reported.
inline CheckReport check_A_bound(const GeometryFields& g, double C) {
  detail::Worst worst;
  for (std::size_t j = 1; j + 1 < g.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < g.spec.nx(); ++i) worst.offer(g.at(i, j).A2, {i, j});
  }
  return detail::make_report("A_bound", "global bound |A|^2 <= C", worst.value - C, 0.0, worst.where,
                             "max |A|^2 = " + detail::fmt(worst.value) + " with C = " + detail::fmt(C));
}

/// W <= 2 (R - delta)/delta max(C0, C1) + tol on {|x1| <= R - 3 delta/2, x2 >= 0}, with
/// C0 = max W(x1, 0) over |x1| <= R - delta and C1 = max W(0, x2) over x2 >= 0.
inline CheckReport check_halfstrip_W_bound(const GeometryFields& g, const SolitonParams& p, double delta, double tol) {
  const GridSpec& s = g.spec;
  const double R = p.R();
  if (!(delta > 0.0) || !(1.5 * delta < R)) throw ArgumentError("half-strip delta must lie in (0, 2R/3)");
  const double h1 = s.h1(), h2 = s.h2();
  const double x1_lo = s.x1(1), x1_hi = s.x1(s.nx() - 2);
  if (x1_lo > -(R - delta) + 1e-9 || x1_hi < (R - delta) - 1e-9) {
    throw ArgumentError("grid interior does not cover |x1| <= R - delta = " + detail::fmt(R - delta));
  }
  const double j0_pos = -s.domain().x2_min / h2;
  const auto j0 = static_cast<std::size_t>(std::lround(j0_pos));
  const double i0_pos = -s.domain().x1_min / h1;
  const auto i0 = static_cast<std::size_t>(std::lround(i0_pos));
  if (std::abs(j0_pos - static_cast<double>(j0)) > 1e-6 || j0 == 0 || j0 + 1 >= s.ny() ||
      std::abs(i0_pos - static_cast<double>(i0)) > 1e-6) {
    throw ArgumentError("half-strip check needs interior grid lines at x2 = 0 and x1 = 0");
  }
  double c0 = 0.0;
  for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
    if (std::abs(s.x1(i)) <= R - delta) c0 = std::max(c0, g.at(i, j0).W);
  }
  double c1 = 0.0;
  for (std::size_t j = j0; j + 1 < s.ny(); ++j) c1 = std::max(c1, g.at(i0, j).W);
  const double bound = 2.0 * (R - delta) / delta * std::max(c0, c1);
  detail::Worst worst;
  for (std::size_t j = j0; j + 1 < s.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
      if (std::abs(s.x1(i)) > R - 1.5 * delta) continue;
      worst.offer(g.at(i, j).W - bound, {i, j});
    }
  }
  return detail::make_report("halfstrip_W_bound", "W <= 2 (R - delta)/delta max(C0, C1) on the inner half-strip",
                             worst.value, tol, worst.where,
                             "C0 = " + detail::fmt(c0) + "; C1 = " + detail::fmt(c1) + "; bound = " + detail::fmt(bound));
}

inline CheckReport check_halfstrip_W_bound(const GridFunction& u, const SolitonParams& p, double delta, double tol) {
  return check_halfstrip_W_bound(geometry_fields(u), p, delta, tol);
}

// ---------------------------------------------------------------------------
// Suites

inline constexpr std::string_view kCheckNames[] = {
    "convexity",          "strip_H_bound",           "H_positive",
    "harnack",            "gradient_bounds",         "soliton_identities",
    "strip_asymptotics_top", "strip_asymptotics_bottom", "x2_monotonicity",
    "symmetry",           "A_bound",                 "halfstrip_W_bound",
};

inline bool is_check_name(std::string_view name) {
  return std::find(std::begin(kCheckNames), std::end(kCheckNames), name) != std::end(kCheckNames);
}

struct SuiteOptions {
  SolitonParams params{2.0};
  double convexity_tol = 1e-6;
  double H_bound_tol = 0.0;
  std::size_t harnack_paths = 100;
  std::uint64_t harnack_seed = 1;
  double harnack_tol = 1e-8;
  double gradient_tol = 1e-8;
  double identity_tol = 1e-3;
  double solver_tol = 1e-10;
  double window = 5.0;
  double asymptotics_tol = 0.05;
  /// Strip margin as a fraction of R used by the asymptotics and H_positive checks.
  double eps_prime_frac = 0.25;
  double monotonicity_tol = 0.05;
  double symmetry_tol = 1e-6;
  double A_bound_C = 1.0;
  /// Half-strip delta as a fraction of R.
  double delta_frac = 0.35;
  double W_bound_tol = 0.0;
};

/// Runs the named checks in order. A check that refuses its input (ArgumentError or
/// DomainError) yields a failing report with the reason in `notes`.
inline std::vector<CheckReport> run_suite(const GridFunction& u, std::span<const std::string> names,
                                          const SuiteOptions& opt) {
  for (const auto& n : names) {
    if (!is_check_name(n)) throw ArgumentError("unknown check '" + n + "'");
  }
  const GeometryFields g = geometry_fields(u);
  const SolitonParams& p = opt.params;
  std::vector<CheckReport> out;
  for (const auto& name : names) {
    try {
      if (name == "convexity") {
        out.push_back(check_convexity(g, opt.convexity_tol));
      } else if (name == "strip_H_bound") {
        out.push_back(check_strip_H_bound(g, p, opt.H_bound_tol));
      } else if (name == "H_positive") {
        out.push_back(check_H_positive(g, p, opt.eps_prime_frac * p.R()));
      } else if (name == "harnack") {
        const auto paths = random_staircase_paths(u.spec(), opt.harnack_paths, opt.harnack_seed);
        out.push_back(check_harnack(u, g, paths, opt.harnack_tol));
      } else if (name == "gradient_bounds") {
        out.push_back(check_gradient_bounds(u, opt.gradient_tol));
      } else if (name == "soliton_identities") {
        out.push_back(check_soliton_identities(u, g, opt.identity_tol, opt.solver_tol));
      } else if (name == "strip_asymptotics_top" || name == "strip_asymptotics_bottom") {
        const AsymptoticsOptions ao{opt.window, opt.asymptotics_tol, opt.eps_prime_frac * p.R()};
        out.push_back(check_strip_asymptotics(u, p, name.ends_with("top") ? StripEnd::Top : StripEnd::Bottom, ao));
      } else if (name == "x2_monotonicity") {
        out.push_back(check_x2_monotonicity(u, p, opt.monotonicity_tol));
      } else if (name == "symmetry") {
        out.push_back(check_symmetry(u, opt.symmetry_tol));
      } else if (name == "A_bound") {
        out.push_back(check_A_bound(g, opt.A_bound_C));
      } else if (name == "halfstrip_W_bound") {
        out.push_back(check_halfstrip_W_bound(g, p, opt.delta_frac * p.R(), opt.W_bound_tol));
      }
    } catch (const std::logic_error& e) {
      CheckReport r;
      r.name = name;
      r.statement_ref = "input refused";
      r.worst_violation = std::numeric_limits<double>::infinity();
      r.tolerance = 0.0;
      r.pass = false;
      r.notes = std::string("refused: ") + e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace tlab
