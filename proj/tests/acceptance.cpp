// Acceptance run: one PASS/FAIL line per criterion with the measured numbers.
// Exit status is 0 only when every criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tlab/tlab.hpp"

using namespace tlab;

namespace {

constexpr double kAnalyticTol = 1e-12;
constexpr double kRatioLo = 3.5, kRatioHi = 4.5;
constexpr double kBowlCurvatureTol = 1e-6;
constexpr double kBowlGapTol = 0.01;
constexpr double kNewtonResidualTol = 1e-10;
constexpr double kGrimDeviationTol = 1e-9;
constexpr double kBowlErrorConstant = 0.1;  // error <= C h^2
constexpr double kMinOrder = 1.8;
constexpr double kConvexityTol = 1e-6;
constexpr double kExactGradientTol = 1e-8;
constexpr double kSolverGradientTol = 1e-4;
constexpr double kHarnackTol = 1e-8;
constexpr std::size_t kHarnackPaths = 100;
constexpr double kABoundC = 1.0;
constexpr double kRoundingTol = 1e-13;
constexpr double kAsymptoticsTol = 0.05;
constexpr double kSymmetryRelTol = 1e-6;

std::size_t odd_nodes(double width, double h) { return 2 * static_cast<std::size_t>(std::lround(width / (2 * h))) + 1; }

GridSpec grid_for(const Rect& r, double h) {
  return GridSpec(r, odd_nodes(r.x1_max - r.x1_min, h), odd_nodes(r.x2_max - r.x2_min, h));
}

double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Line {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [fail]");
  }
};

struct Solutions {
  GridFunction grim, bowl, strip;
  SolitonParams grim_params{2.0};
};

Solutions& solved() {
  static Solutions s = [] {
    Solutions out{GridFunction(GridSpec({0, 1, 0, 1}, 3, 3)), GridFunction(GridSpec({0, 1, 0, 1}, 3, 3)),
                  GridFunction(GridSpec({0, 1, 0, 1}, 3, 3))};
    const SolitonParams p(2.0);
    {
      const GridSpec spec({-2.5, 2.5, -3, 3}, 101, 121);
      const DirichletData bc = DirichletData::from_surface(GrimCylinderSurface{p}, spec);
      out.grim = newton_solve(spec.domain(), bc, transfinite_fill(bc), SolveConfig{}).solution;
    }
    {
      const GridSpec spec = grid_for({-4, 4, -4, 4}, 0.05);
      const DirichletData bc = DirichletData::from_surface(RadialBowlSurface(bowl_profile_solve(6.0, 1e-4)), spec);
      out.bowl = newton_solve(spec.domain(), bc, transfinite_fill(bc), SolveConfig{}).solution;
    }
    {
      const StripBoundary sb = strip_boundary_data(p, 0.25 * p.R(), 30.0, 3.0);
      const GridSpec spec = grid_for(sb.rect(), 0.1);
      const DirichletData bc = DirichletData::from_surface(sb, spec);
      out.strip = newton_solve(spec.domain(), bc, transfinite_fill(bc), SolveConfig{}).solution;
    }
    return out;
  }();
  return s;
}

Line closed_form_exactness() {
  Line l;
  std::mt19937_64 rng(20241015);
  double worst = 0.0;
  for (double lam : {1.0, 1.5, 2.0, 4.0}) {
    for (Tilt t : {Tilt::Plus, Tilt::Minus}) {
      const SolitonParams p(lam, t);
      std::uniform_real_distribution<double> x1(-0.9 * p.R(), 0.9 * p.R()), x2(-10.0, 10.0);
      for (int k = 0; k < 1000; ++k) worst = std::max(worst, std::abs(grim_cylinder_residual(p, x1(rng), x2(rng))));
    }
  }
  l.require(worst <= kAnalyticTol, "max residual " + g(worst) + " over 8000 points");
  return l;
}

Line discrete_order() {
  Line l;
  const SolitonParams p(2.0);
  double res[2];
  int k = 0;
  for (double h : {0.02, 0.01}) {
    const Rect r{-0.5 * p.R(), 0.5 * p.R(), -0.5, 0.5};
    const GridSpec s = grid_for(r, h);
    res[k++] = max_abs(translator_residual(sample_to_grid(GrimCylinderSurface{p}, r, s.nx(), s.ny()))).value;
  }
  const double ratio = res[0] / res[1];
  l.require(ratio >= kRatioLo && ratio <= kRatioHi,
            "residual " + g(res[0]) + " -> " + g(res[1]) + ", ratio " + g(ratio));
  return l;
}

Line bowl_profile() {
  Line l;
  const BowlProfile b = bowl_profile_solve(80.0, 1e-3);
  const double curvature = b.fp[1] / b.r[1];
  const double gap = bowl_asymptote_gap(b, 40.0, 80.0);
  l.require(std::abs(curvature - 0.5) <= kBowlCurvatureTol, "f''(0) " + g(curvature));
  l.require(gap < kBowlGapTol, "gap over [40,80] " + g(gap));
  return l;
}

Line solver_vs_oracle() {
  Line l;
  const SolitonParams p(2.0);
  const GridSpec spec({-2.5, 2.5, -3, 3}, 101, 121);
  const DirichletData bc = DirichletData::from_surface(GrimCylinderSurface{p}, spec);
  const SolveOutcome out = newton_solve(spec.domain(), bc, transfinite_fill(bc), SolveConfig{});
  l.require(out.converged && out.final_residual <= kNewtonResidualTol,
            "grim residual " + g(out.final_residual) + " in " + std::to_string(out.iterations) + " iterations");
  const double dev = max_diff(out.solution, sample_to_grid(GrimCylinderSurface{p}, spec.domain(), spec.nx(), spec.ny()));
  l.require(dev <= kGrimDeviationTol, "grim deviation " + g(dev));

  const RadialBowlSurface oracle(bowl_profile_solve(6.0, 1e-4));
  std::vector<double> hs{0.2, 0.1, 0.05}, err;
  bool within = true;
  for (double h : hs) {
    const GridSpec s = grid_for({-4, 4, -4, 4}, h);
    const DirichletData b = DirichletData::from_surface(oracle, s);
    const SolveOutcome o = newton_solve(s.domain(), b, transfinite_fill(b), SolveConfig{});
    err.push_back(o.converged ? max_diff(o.solution, sample_to_grid(oracle, s.domain(), s.nx(), s.ny()))
                              : std::numeric_limits<double>::infinity());
    within = within && err.back() <= kBowlErrorConstant * h * h;
  }
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < err.size(); ++k) order = std::min(order, std::log2(err[k] / err[k + 1]));
  l.require(within, "bowl errors " + g(err[0]) + " " + g(err[1]) + " " + g(err[2]));
  l.require(order >= kMinOrder, "bowl order " + g(order));
  return l;
}

Line inequality_suite() {
  Line l;
  const Solutions& s = solved();
  const SolitonParams p(2.0);
  struct Named {
    const char* name;
    const GridFunction* u;
    bool in_strip;
  };
  const Named all[] = {{"grim", &s.grim, true}, {"bowl", &s.bowl, false}, {"strip", &s.strip, true}};

  for (const Named& n : all) {
    const GeometryFields geo = geometry_fields(*n.u);
    const CheckReport c = check_convexity(geo, kConvexityTol);
    l.require(c.pass, std::string(n.name) + " convexity " + g(c.worst_violation));
    if (n.in_strip) {
      const CheckReport h = check_strip_H_bound(geo, p, 0.0);
      l.require(h.pass, std::string(n.name) + " H bound " + g(h.worst_violation));
      const CheckReport gb = check_gradient_bounds(*n.u, kSolverGradientTol);
      l.require(gb.pass, std::string(n.name) + " gradient " + g(gb.worst_violation));
    }
    const CheckReport hk =
        check_harnack(*n.u, geo, random_staircase_paths(n.u->spec(), kHarnackPaths, 1), kHarnackTol);
    l.require(hk.pass, std::string(n.name) + " harnack " + g(hk.worst_violation));
    const CheckReport a = check_A_bound(geo, kABoundC);
    l.require(a.pass, std::string(n.name) + " A " + g(a.worst_violation));
  }

  double exact = -std::numeric_limits<double>::infinity();
  for (double lam : {1.0, 1.5, 2.0, 4.0}) {
    const SolitonParams q(lam);
    const Rect r{-0.9 * q.R(), 0.9 * q.R(), -1, 1};
    const GridSpec gs = grid_for(r, 0.01);
    exact = std::max(exact, check_gradient_bounds(sample_to_grid(GrimCylinderSurface{q}, r, gs.nx(), gs.ny()),
                                                  kExactGradientTol)
                                .worst_violation);
  }
  l.require(exact <= kExactGradientTol, "exact-sample gradient " + g(exact));
  return l;
}

Line identity_suite() {
  Line l;
  const SolitonParams p(2.0);
  double tangential = 0.0, dh[2], dw[2];
  int k = 0;
  for (double h : {0.02, 0.01}) {
    const Rect r{-0.8 * p.R(), 0.8 * p.R(), -0.5, 0.5};
    const GridSpec s = grid_for(r, h);
    const DriftResiduals d = drift_identity_residuals(geometry_fields(sample_to_grid(GrimCylinderSurface{p}, r, s.nx(), s.ny())));
    tangential = std::max(tangential, max_abs(d.tangential, 2).value);
    dh[k] = max_abs(d.drift_H, 2).value;
    dw[k] = max_abs(d.drift_W, 2).value;
    ++k;
  }
  const double oh = std::log2(dh[0] / dh[1]), ow = std::log2(dw[0] / dw[1]);
  l.require(tangential <= kRoundingTol, "tangential " + g(tangential));
  l.require(oh >= kMinOrder, "drift H " + g(dh[1]) + " order " + g(oh));
  l.require(ow >= kMinOrder, "drift W " + g(dw[1]) + " order " + g(ow));
  return l;
}

Line strip_asymptotics() {
  Line l;
  const GridFunction& u = solved().strip;
  const SolitonParams p(2.0);
  const AsymptoticsOptions opt{5.0, kAsymptoticsTol, 0.25 * p.R()};
  for (StripEnd end : {StripEnd::Top, StripEnd::Bottom}) {
    const CheckReport r = check_strip_asymptotics(u, p, end, opt);
    l.require(r.pass, r.name + " " + g(r.worst_violation));
  }
  double scale = 0.0;
  for (double v : u.values()) scale = std::max(scale, std::abs(v));
  const CheckReport s = check_symmetry(u, kSymmetryRelTol * scale);
  l.require(s.pass, "symmetry " + g(s.worst_violation) + " vs " + g(s.tolerance));
  return l;
}

Line falsifiability() {
  Line l;
  auto expect_fail = [&](const std::string& what, const CheckReport& r) {
    l.require(!r.pass && r.worst_violation > 0.0, what + " " + g(r.worst_violation));
  };
  const Rect box{-1, 1, -1, 1};
  const GridFunction saddle = sample_to_grid([](double x1, double x2) { return x1 * x1 - x2 * x2; }, box, 21, 21);
  expect_fail("saddle", check_convexity(geometry_fields(saddle), kConvexityTol));

  const SolitonParams unit(1.0);
  GeometryFields inflated = geometry_fields(sample_to_grid(GrimCylinderSurface{unit}, {-1.2, 1.2, -1, 1}, 49, 41));
  for (auto& n : inflated.nodes) n.H *= 3;
  expect_fail("inflated H", check_strip_H_bound(inflated, unit, 0.0));

  const GridFunction skew = sample_to_grid([](double x1, double x2) { return x1 + x2; }, box, 11, 11);
  expect_fail("asymmetric", check_symmetry(skew, 1e-6));

  const GridFunction parabola = sample_to_grid([](double x1, double) { return x1 * x1; }, {-2, 2, -1, 1}, 41, 21);
  expect_fail("parabola gradient", check_gradient_bounds(parabola, kExactGradientTol));
  expect_fail("parabola A", check_A_bound(geometry_fields(parabola), kABoundC));

  const SolitonParams p(2.0);
  const GridFunction grim = sample_to_grid(GrimCylinderSurface{p}, {-2.5, 2.5, -1, 1}, 51, 21);
  GeometryFields jump = geometry_fields(grim);
  for (std::size_t j = 0; j < grim.ny(); ++j) {
    for (std::size_t i = 25; i < grim.nx(); ++i) jump.at(i, j).H *= 10;
  }
  const std::vector<NodePath> across{{{24, 5}, {25, 5}}};
  expect_fail("H jump", check_harnack(grim, jump, across, kHarnackTol));

  const std::vector<std::string> ids{"soliton_identities"};
  expect_fail("zero function", run_suite(GridFunction(GridSpec(box, 9, 9)), ids, SuiteOptions{})[0]);
  return l;
}

Line round_trips() {
  Line l;
  const GridFunction& u = solved().grim;
  std::ostringstream a, b;
  write_grid(a, u);
  std::istringstream ia(a.str());
  write_grid(b, read_grid(ia));
  l.require(a.str() == b.str(), "grid " + std::to_string(a.str().size()) + " bytes");

  ReportFile r;
  r.inputs = Json{{"solution", "grim"}, {"lambda", 2.0}};
  r.run_id = run_id_for(r.inputs);
  std::vector<std::string> names;
  for (auto n : kCheckNames) names.emplace_back(n);
  r.checks = run_suite(u, names, SuiteOptions{});
  std::ostringstream c, d;
  write_report(c, r);
  std::istringstream ic(c.str());
  write_report(d, read_report(ic));
  l.require(c.str() == d.str(), "report " + std::to_string(c.str().size()) + " bytes");
  return l;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Line()>> criteria[] = {
      {"closed-form exactness", closed_form_exactness},
      {"discrete consistency order", discrete_order},
      {"bowl profile", bowl_profile},
      {"solver against oracles", solver_vs_oracle},
      {"inequality suite on computed solutions", inequality_suite},
      {"identity suite", identity_suite},
      {"strip asymptotics and symmetry", strip_asymptotics},
      {"harness falsifiability", falsifiability},
      {"format round trips", round_trips},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Line l;
    try {
      l = run();
    } catch (const std::exception& e) {
      l.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += l.pass ? 0 : 1;
    std::printf("%s %d %s: %s (%.1fs)\n", l.pass ? "PASS" : "FAIL", index, name, l.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
