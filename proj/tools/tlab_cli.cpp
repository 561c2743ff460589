// tlab: generate reference solitons, solve translator Dirichlet problems,
// certify solutions and export the bowl profile.
//
// Exit codes: 0 success / all checks pass, 1 usage or I/O error,
// 2 solver did not converge, 3 some checks failed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tlab/tlab.hpp"

namespace {

using tlab::Json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNoConvergence = 2;
constexpr int kChecksFailed = 3;

struct Fail {
  int code;
  std::string message;
};

tlab::Tilt parse_tilt(const std::string& s) {
  if (s == "+" || s == "plus") return tlab::Tilt::Plus;
  if (s == "-" || s == "minus") return tlab::Tilt::Minus;
  throw Fail{kUsage, "tilt must be '+' or '-' (or plus/minus), got '" + s + "'"};
}

// Odd, so that a domain symmetric about 0 has a node on the axis.
std::size_t nodes_for(double lo, double hi, double h) {
  if (!(h > 0.0)) throw Fail{kUsage, "grid spacing must be positive"};
  return 2 * static_cast<std::size_t>(std::lround((hi - lo) / (2 * h))) + 1;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string family;
  double lambda = 2.0;
  std::string tilt = "+";
  double R = 1.0, t = 0.0, A = 0.0;
  double rmax = 0.0;
  double step = 1e-3;
  std::size_t nx = 101, ny = 101;
  std::optional<double> x1min, x1max, x2min, x2max;
  std::string out;
};

tlab::Rect default_rect(const GenerateArgs& a) {
  if (a.family == "reaper") return {-0.8 * M_PI / 2, 0.8 * M_PI / 2, -1.0, 1.0};
  if (a.family == "grim") {
    const double R = tlab::SolitonParams(a.lambda).R();
    return {-0.8 * R, 0.8 * R, -0.8 * R, 0.8 * R};
  }
  if (a.family == "tilted") return {-0.8 * a.R, 0.8 * a.R, -a.R, a.R};
  return {-4.0, 4.0, -4.0, 4.0};
}

tlab::Rect resolve_rect(const GenerateArgs& a) {
  tlab::Rect r = default_rect(a);
  if (a.x1min) r.x1_min = *a.x1min;
  if (a.x1max) r.x1_max = *a.x1max;
  if (a.x2min) r.x2_min = *a.x2min;
  if (a.x2max) r.x2_max = *a.x2max;
  return r;
}

double corner_radius(const tlab::Rect& r) {
  return std::max({std::hypot(r.x1_min, r.x2_min), std::hypot(r.x1_min, r.x2_max), std::hypot(r.x1_max, r.x2_min),
                   std::hypot(r.x1_max, r.x2_max)});
}

int run_generate(const GenerateArgs& a) {
  const tlab::Rect rect = resolve_rect(a);
  tlab::GridFunction u;
  if (a.family == "reaper") {
    u = tlab::sample_to_grid(tlab::GrimReaperSurface{}, rect, a.nx, a.ny);
  } else if (a.family == "grim") {
    u = tlab::sample_to_grid(tlab::GrimCylinderSurface{tlab::SolitonParams(a.lambda, parse_tilt(a.tilt))}, rect, a.nx,
                             a.ny);
  } else if (a.family == "tilted") {
    u = tlab::sample_to_grid(tlab::TiltedCylinderSurface{{a.R, a.t, a.A}}, rect, a.nx, a.ny);
  } else {
    const double rmax = a.rmax > 0.0 ? a.rmax : 1.01 * corner_radius(rect);
    const auto profile = tlab::bowl_profile_solve(rmax, a.step);
    u = tlab::sample_to_grid(tlab::RadialBowlSurface(profile), rect, a.nx, a.ny);
  }
  tlab::save_grid(a.out, u);
  if (a.nx >= 5 && a.ny >= 5) {
    std::printf("max_residual %s\n", tlab::format_real(tlab::max_abs(tlab::translator_residual(u)).value).c_str());
  } else {
    std::printf("max_residual n/a (grid smaller than 5x5)\n");
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string mode = "newton";
  std::string boundary = "grim";
  std::string file;
  std::string init;
  double lambda = 2.0;
  std::string tilt = "+";
  double epsilon_frac = 0.25;
  double Y = 30.0;
  double smoothing = 3.0;
  double h = 0.1;
  std::size_t nx = 0, ny = 0;
  std::optional<double> x1min, x1max, x2min, x2max;
  double bowl_step = 1e-4;
  double tol = 1e-10;
  std::size_t max_iters = 50;
  double damping = 1.0;
  double relax_dt = 0.0;
  std::size_t max_relax_steps = 200000;
  std::string linear = "auto";
  std::string out;
  std::string log;
};

int run_solve(const SolveArgs& a) {
  tlab::SolveConfig cfg;
  cfg.tol = a.tol;
  cfg.max_newton_iters = a.max_iters;
  cfg.damping = a.damping;
  cfg.max_relax_steps = a.max_relax_steps;
  if (a.linear == "direct") {
    cfg.linear_solver = tlab::LinearSolver::Direct;
  } else if (a.linear == "iterative") {
    cfg.linear_solver = tlab::LinearSolver::Iterative;
  }

  std::optional<tlab::DirichletData> bc;
  std::optional<tlab::GridFunction> init;
  if (a.boundary == "file") {
    if (a.file.empty()) throw Fail{kUsage, "--boundary file needs a grid path"};
    tlab::GridFunction g = tlab::load_grid(a.file);
    bc = tlab::DirichletData::from_grid(g);
    init = std::move(g);
  } else {
    tlab::Rect rect;
    const tlab::SolitonParams p(a.lambda, parse_tilt(a.tilt));
    std::optional<tlab::StripBoundary> strip;
    std::optional<tlab::RadialBowlSurface> bowl;
    if (a.boundary == "grim") {
      rect = {-0.8 * p.R(), 0.8 * p.R(), -3.0, 3.0};
    } else if (a.boundary == "bowl") {
      rect = {-4.0, 4.0, -4.0, 4.0};
    } else {
      strip.emplace(tlab::strip_boundary_data(p, a.epsilon_frac * p.R(), a.Y, a.smoothing));
      rect = strip->rect();
    }
    if (a.x1min) rect.x1_min = *a.x1min;
    if (a.x1max) rect.x1_max = *a.x1max;
    if (a.x2min) rect.x2_min = *a.x2min;
    if (a.x2max) rect.x2_max = *a.x2max;
    const std::size_t nx = a.nx ? a.nx : nodes_for(rect.x1_min, rect.x1_max, a.h);
    const std::size_t ny = a.ny ? a.ny : nodes_for(rect.x2_min, rect.x2_max, a.h);
    const tlab::GridSpec spec(rect, nx, ny);
    if (a.boundary == "grim") {
      bc = tlab::DirichletData::from_surface(tlab::GrimCylinderSurface{p}, spec);
    } else if (a.boundary == "bowl") {
      bowl.emplace(tlab::bowl_profile_solve(1.01 * corner_radius(rect), a.bowl_step));
      bc = tlab::DirichletData::from_surface(*bowl, spec);
    } else {
      bc = tlab::DirichletData::from_surface(*strip, spec);
    }
  }
  if (!a.init.empty()) {
    init = tlab::load_grid(a.init);
  } else if (!init) {
    init = tlab::transfinite_fill(*bc);
  }
  if (!(init->spec() == bc->spec)) throw Fail{kUsage, "initial grid layout differs from the boundary grid"};

  const double hmin = std::min(bc->spec.h1(), bc->spec.h2());
  cfg.relax_dt = a.relax_dt > 0.0 ? a.relax_dt : 0.2 * hmin * hmin;

  tlab::SolveOutcome out;
  try {
    out = a.mode == "newton" ? tlab::newton_solve(bc->spec.domain(), *bc, std::move(*init), cfg)
                             : tlab::parabolic_relax(std::move(*init), *bc, cfg);
  } catch (const tlab::SolverError& e) {
    throw Fail{kNoConvergence, e.what()};
  }

  tlab::save_grid(a.out, out.solution);
  const std::string log_path = a.log.empty() ? a.out + ".log" : a.log;
  std::ofstream log(log_path);
  if (!log) throw Fail{kUsage, "cannot open log '" + log_path + "'"};
  log << "mode " << a.mode << "\nboundary " << a.boundary << "\ngrid " << bc->spec.nx() << ' ' << bc->spec.ny()
      << "\ntol " << tlab::format_real(cfg.tol) << '\n';
  if (a.mode == "relax") log << "relax_dt " << tlab::format_real(cfg.relax_dt) << '\n';
  log << "iterations " << out.iterations << "\nconverged " << (out.converged ? "true" : "false") << "\nfinal_residual "
      << tlab::format_real(out.final_residual) << '\n';
  if (!out.diagnostic.empty()) log << "diagnostic " << out.diagnostic << '\n';
  log << "history\n";
  for (std::size_t k = 0; k < out.history.size(); ++k) log << k << ' ' << tlab::format_real(out.history[k]) << '\n';

  std::printf("%s: %s after %zu iterations, residual %s\n", a.mode.c_str(), out.converged ? "converged" : "NOT converged",
              out.iterations, tlab::format_real(out.final_residual).c_str());
  if (!out.converged) {
    std::fprintf(stderr, "error: %s\n", out.diagnostic.c_str());
    return kNoConvergence;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string solution;
  std::string suite;
  double lambda = 2.0;
  std::string tilt = "+";
  tlab::SuiteOptions opt;
  std::string out;
};

std::vector<std::string> split_suite(const std::string& s) {
  std::vector<std::string> names;
  if (s.empty()) {
    for (const auto n : tlab::kCheckNames) names.emplace_back(n);
    return names;
  }
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    if (!cur.empty()) names.push_back(cur);
  }
  return names;
}

int run_check(CheckArgs a) {
  const auto names = split_suite(a.suite);
  for (const auto& n : names) {
    if (!tlab::is_check_name(n)) {
      std::string valid;
      for (const auto v : tlab::kCheckNames) valid += (valid.empty() ? "" : ", ") + std::string(v);
      throw Fail{kUsage, "unknown check '" + n + "'; valid names: " + valid};
    }
  }
  a.opt.params = tlab::SolitonParams(a.lambda, parse_tilt(a.tilt));
  const tlab::GridFunction u = tlab::load_grid(a.solution);

  const auto& o = a.opt;
  tlab::ReportFile report;
  Json suite = Json::array();
  for (const auto& n : names) suite.push_back(n);
  report.inputs = Json{{"solution", a.solution},
                       {"suite", suite},
                       {"lambda", a.lambda},
                       {"tilt", a.tilt},
                       {"convexity_tol", o.convexity_tol},
                       {"H_bound_tol", o.H_bound_tol},
                       {"harnack_paths", o.harnack_paths},
                       {"harnack_seed", o.harnack_seed},
                       {"harnack_tol", o.harnack_tol},
                       {"gradient_tol", o.gradient_tol},
                       {"identity_tol", o.identity_tol},
                       {"solver_tol", o.solver_tol},
                       {"window", o.window},
                       {"asymptotics_tol", o.asymptotics_tol},
                       {"eps_prime_frac", o.eps_prime_frac},
                       {"monotonicity_tol", o.monotonicity_tol},
                       {"symmetry_tol", o.symmetry_tol},
                       {"A_bound_C", o.A_bound_C},
                       {"delta_frac", o.delta_frac},
                       {"W_bound_tol", o.W_bound_tol}};
  report.run_id = tlab::run_id_for(report.inputs);
  report.checks = tlab::run_suite(u, names, a.opt);

  std::ofstream os(a.out);
  if (!os) throw Fail{kUsage, "cannot open report '" + a.out + "' for writing"};
  tlab::write_report(os, report);
  for (const auto& c : report.checks) {
    std::printf("%-26s %s  worst %s  tol %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                tlab::format_real(c.worst_violation).c_str(), tlab::format_real(c.tolerance).c_str());
  }
  std::printf("passed %zu failed %zu\n", report.passed(), report.failed());
  return report.failed() == 0 ? kOk : kChecksFailed;
}

// ---------------------------------------------------------------------------

struct ProfileArgs {
  double rmax = 80.0;
  double step = 1e-3;
  std::size_t stride = 1;
  std::string out;
};

int run_profile(const ProfileArgs& a) {
  const auto b = tlab::bowl_profile_solve(a.rmax, a.step);
  std::ofstream os(a.out, std::ios::binary);
  if (!os) throw Fail{kUsage, "cannot open '" + a.out + "' for writing"};
  tlab::write_profile_csv(os, tlab::profile_table(b, a.stride));
  return kOk;
}

void add_rect_options(CLI::App* cmd, std::optional<double>& x1min, std::optional<double>& x1max,
                      std::optional<double>& x2min, std::optional<double>& x2max) {
  cmd->add_option("--x1min", x1min, "Grid x1 lower bound (family default when omitted)");
  cmd->add_option("--x1max", x1max, "Grid x1 upper bound");
  cmd->add_option("--x2min", x2min, "Grid x2 lower bound");
  cmd->add_option("--x2max", x2max, "Grid x2 upper bound");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translating soliton laboratory"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample a closed-form or bowl soliton onto a grid file");
  g->add_option("family", gen.family, "reaper | grim | tilted | bowl")
      ->required()
      ->check(CLI::IsMember({"reaper", "grim", "tilted", "bowl"}));
  g->add_option("--lambda", gen.lambda, "Grim cylinder scale (>= 1)")->capture_default_str();
  g->add_option("--tilt", gen.tilt, "Grim cylinder tilt sign: + or -")->capture_default_str();
  g->add_option("--R", gen.R, "Tilted cylinder radius")->capture_default_str();
  g->add_option("--t", gen.t, "Tilted cylinder tilt")->capture_default_str();
  g->add_option("--A", gen.A, "Tilted cylinder x2 offset")->capture_default_str();
  g->add_option("--rmax", gen.rmax, "Bowl profile radius (0: just past the grid corners)")->capture_default_str();
  g->add_option("--step", gen.step, "Bowl ODE step")->capture_default_str();
  g->add_option("--nx", gen.nx, "Nodes along x1")->capture_default_str();
  g->add_option("--ny", gen.ny, "Nodes along x2")->capture_default_str();
  add_rect_options(g, gen.x1min, gen.x1max, gen.x2min, gen.x2max);
  g->add_option("--out", gen.out, "Output grid file")->required();

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Solve the translator equation with Dirichlet data");
  s->add_option("--mode,mode", sol.mode, "newton | relax")->capture_default_str()->check(CLI::IsMember({"newton", "relax"}));
  s->add_option("--boundary", sol.boundary, "file | grim | bowl | strip")
      ->capture_default_str()
      ->check(CLI::IsMember({"file", "grim", "bowl", "strip"}));
  s->add_option("--file,source", sol.file, "Grid file supplying boundary values (and the initial guess)");
  s->add_option("--init", sol.init, "Grid file with the initial guess");
  s->add_option("--lambda", sol.lambda, "Grim/strip scale (>= 1)")->capture_default_str();
  s->add_option("--tilt", sol.tilt, "Grim tilt sign")->capture_default_str();
  s->add_option("--epsilon-frac", sol.epsilon_frac, "Strip margin as a fraction of R")->capture_default_str();
  s->add_option("--Y", sol.Y, "Strip half-height")->capture_default_str();
  s->add_option("--smoothing", sol.smoothing, "Strip boundary smoothing")->capture_default_str();
  s->add_option("--spacing", sol.h, "Target grid spacing")->capture_default_str();
  s->add_option("--nx", sol.nx, "Nodes along x1 (0: from --spacing)")->capture_default_str();
  s->add_option("--ny", sol.ny, "Nodes along x2 (0: from --spacing)")->capture_default_str();
  add_rect_options(s, sol.x1min, sol.x1max, sol.x2min, sol.x2max);
  s->add_option("--bowl-step", sol.bowl_step, "Bowl ODE step for bowl boundary data")->capture_default_str();
  s->add_option("--tol", sol.tol, "Residual max-norm target")->capture_default_str();
  s->add_option("--max-iters", sol.max_iters, "Newton iteration budget")->capture_default_str();
  s->add_option("--damping", sol.damping, "Initial Newton step fraction")->capture_default_str();
  s->add_option("--relax-dt", sol.relax_dt, "Pseudo-time step (0: 0.2 h^2)")->capture_default_str();
  s->add_option("--max-relax-steps", sol.max_relax_steps, "Relaxation step budget")->capture_default_str();
  s->add_option("--linear", sol.linear, "auto | direct | iterative")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "direct", "iterative"}));
  s->add_option("--out", sol.out, "Output grid file")->required();
  s->add_option("--log", sol.log, "Convergence log (default: <out>.log)");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "Certify a solution grid and write a JSON report");
  c->add_option("--solution,solution", chk.solution, "Solution grid file")->required();
  c->add_option("--suite", chk.suite, "Comma-separated check names (default: all)");
  c->add_option("--lambda", chk.lambda, "Strip scale used by strip checks")->capture_default_str();
  c->add_option("--tilt", chk.tilt, "Tilt sign (informational)")->capture_default_str();
  auto& o = chk.opt;
  c->add_option("--convexity-tol", o.convexity_tol)->capture_default_str();
  c->add_option("--H-bound-tol", o.H_bound_tol)->capture_default_str();
  c->add_option("--harnack-paths", o.harnack_paths)->capture_default_str();
  c->add_option("--harnack-seed", o.harnack_seed)->capture_default_str();
  c->add_option("--harnack-tol", o.harnack_tol)->capture_default_str();
  c->add_option("--gradient-tol", o.gradient_tol)->capture_default_str();
  c->add_option("--identity-tol", o.identity_tol)->capture_default_str();
  c->add_option("--solver-tol", o.solver_tol, "Inputs with residual above 10x this are refused by soliton_identities")
      ->capture_default_str();
  c->add_option("--window", o.window)->capture_default_str();
  c->add_option("--asymptotics-tol", o.asymptotics_tol)->capture_default_str();
  c->add_option("--eps-prime-frac", o.eps_prime_frac)->capture_default_str();
  c->add_option("--monotonicity-tol", o.monotonicity_tol)->capture_default_str();
  c->add_option("--symmetry-tol", o.symmetry_tol)->capture_default_str();
  c->add_option("--A-bound-C", o.A_bound_C)->capture_default_str();
  c->add_option("--delta-frac", o.delta_frac)->capture_default_str();
  c->add_option("--W-bound-tol", o.W_bound_tol)->capture_default_str();
  c->add_option("--out", chk.out, "Report JSON path")->required();

  ProfileArgs prof;
  auto* pe = app.add_subcommand("profile-export", "Write the bowl profile as CSV");
  pe->add_option("--rmax", prof.rmax)->capture_default_str();
  pe->add_option("--step", prof.step)->capture_default_str();
  pe->add_option("--stride", prof.stride, "Write every n-th node")->capture_default_str();
  pe->add_option("--out", prof.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*s) return run_solve(sol);
    if (*c) return run_check(chk);
    return run_profile(prof);
  } catch (const Fail& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
