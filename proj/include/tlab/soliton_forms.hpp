#pragma once

// Reference translating solitons: the grim reaper, the tilted grim cylinders
// u^lambda(x1, x2) = lambda^2 log sec(x1/lambda) +- L x2 over the strip |x1| < lambda*pi/2,
// the constant-mean-curvature tilted cylinders used as barriers, and the
// rotationally symmetric bowl obtained from its radial ODE.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "tlab/errors.hpp"
#include "tlab/grid.hpp"

namespace tlab {

namespace detail {

// Relative distance from the strip edge inside which log sec is refused.
inline constexpr double kEdgeMargin = 1e-7;

inline void require_inside_strip(double x1, double half_width, const char* what) {
  if (!std::isfinite(x1) || std::abs(x1) >= half_width * (1.0 - kEdgeMargin)) {
    throw DomainError(std::string(what) + ": |x1| = " + std::to_string(std::abs(x1)) +
                      " is not inside the strip |x1| < " + std::to_string(half_width));
  }
}

inline double log_sec(double t) { return -std::log(std::cos(t)); }

}  // namespace detail

/// x2 = log sec x1 on |x1| < pi/2.
inline double grim_reaper_value(double x1) {
  detail::require_inside_strip(x1, std::numbers::pi / 2, "grim reaper");
  return detail::log_sec(x1);
}

enum class Tilt : int { Plus = 1, Minus = -1 };

/// Scale lambda >= 1 and tilt direction of the grim cylinder u^lambda.
class SolitonParams {
 public:
  explicit SolitonParams(double lambda = 1.0, Tilt tilt = Tilt::Plus) : lambda_(lambda), tilt_(tilt) {
    if (!std::isfinite(lambda) || lambda < 1.0) {
      throw ArgumentError("lambda must be >= 1, got " + std::to_string(lambda));
    }
    // (lambda-1)(lambda+1) avoids cancellation for lambda close to 1.
    slope_ = std::sqrt((lambda - 1.0) * (lambda + 1.0));
  }

  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] Tilt tilt() const noexcept { return tilt_; }
  [[nodiscard]] double tilt_sign() const noexcept { return static_cast<double>(static_cast<int>(tilt_)); }
  /// Strip half-width R = lambda*pi/2.
  [[nodiscard]] double R() const noexcept { return lambda_ * std::numbers::pi / 2; }
  /// Tilt slope L = sqrt(lambda^2 - 1).
  [[nodiscard]] double L() const noexcept { return slope_; }

 private:
  double lambda_;
  Tilt tilt_;
  double slope_ = 0.0;
};

inline double grim_cylinder_value(const SolitonParams& p, double x1, double x2) {
  detail::require_inside_strip(x1, p.R(), "grim cylinder");
  const double lam = p.lambda();
  return lam * lam * detail::log_sec(x1 / lam) + p.tilt_sign() * p.L() * x2;
}

struct Gradient2 {
  double d1 = 0.0;
  double d2 = 0.0;
};

inline Gradient2 grim_cylinder_gradient(const SolitonParams& p, double x1, double /*x2*/) {
  detail::require_inside_strip(x1, p.R(), "grim cylinder");
  return {p.lambda() * std::tan(x1 / p.lambda()), p.tilt_sign() * p.L()};
}

/// LHS - RHS of the nondivergence translator equation evaluated with the exact
/// derivatives of u^lambda (u11 = sec^2(x1/lambda), u12 = u22 = 0).
inline double grim_cylinder_residual(const SolitonParams& p, double x1, double x2) {
  const auto [u1, u2] = grim_cylinder_gradient(p, x1, x2);
  const double c = std::cos(x1 / p.lambda());
  const double u11 = 1.0 / (c * c);
  const double lhs = (1.0 + u2 * u2) * u11;
  const double rhs = 1.0 + u1 * u1 + u2 * u2;
  return lhs - rhs;
}

/// Tilted cylinder x3 = -sqrt(1+t^2) sqrt(R^2 - x1^2) + t (x2 - A), mean curvature 1/R.
struct TiltedCylinderParams {
  double R = 1.0;
  double t = 0.0;
  double A = 0.0;
};

inline double tilted_cylinder_value(const TiltedCylinderParams& c, double x1, double x2) {
  if (!(c.R > 0.0)) {
    throw ArgumentError("tilted cylinder radius must be positive");
  }
  if (!std::isfinite(x1) || std::abs(x1) > c.R) {
    throw DomainError("tilted cylinder: |x1| = " + std::to_string(std::abs(x1)) + " exceeds R = " +
                      std::to_string(c.R));
  }
  return -std::sqrt(1.0 + c.t * c.t) * std::sqrt((c.R - x1) * (c.R + x1)) + c.t * (x2 - c.A);
}

// ---------------------------------------------------------------------------
// Bowl soliton

/// Radial samples of the bowl x3 = f(|x|); r starts at 0 with uniform spacing.
struct BowlProfile {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> fp;

  [[nodiscard]] std::size_t size() const noexcept { return r.size(); }
  [[nodiscard]] double r_max() const noexcept { return r.empty() ? 0.0 : r.back(); }
  [[nodiscard]] double step() const noexcept { return r.size() < 2 ? 0.0 : r[1] - r[0]; }
};

namespace detail {

// f'' = (1 + f'^2)(1 - f'/r), the radial reduction of the graph translator equation.
inline double bowl_second_derivative(double r, double fp) { return (1.0 + fp * fp) * (1.0 - fp / r); }

// Largest step*r_max for which the explicit RK4 stays inside its real-axis stability interval;
// the Jacobian of the slope equation behaves like -r for large r.
inline constexpr double kBowlStabilityLimit = 2.5;

}  // namespace detail

/// Integrates the radial bowl ODE with classical RK4 on [0, r_max]. The step is
/// shrunk slightly, if needed, so that r_max is a grid node.
inline BowlProfile bowl_profile_solve(double r_max, double step) {
  if (!(r_max > 0.0) || !(step > 0.0) || !std::isfinite(r_max) || !std::isfinite(step)) {
    throw ArgumentError("bowl profile needs positive r_max and step");
  }
  const auto n = static_cast<std::size_t>(std::ceil(r_max / step - 1e-9));
  if (n < 3) {
    throw ArgumentError("bowl profile needs at least 3 steps on [0, r_max]");
  }
  const double h = r_max / static_cast<double>(n);
  if (h * r_max > detail::kBowlStabilityLimit) {
    throw ArgumentError("bowl step " + std::to_string(h) + " is unstable for r_max " + std::to_string(r_max) +
                        " (need step*r_max <= " + std::to_string(detail::kBowlStabilityLimit) + ")");
  }

  BowlProfile b;
  b.r.resize(n + 1);
  b.f.resize(n + 1);
  b.fp.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    b.r[k] = k == n ? r_max : static_cast<double>(k) * h;
  }
  b.f[0] = 0.0;
  b.fp[0] = 0.0;
  // Series at the axis: f = r^2/4 + r^4/128 + O(r^6).
  const double r1 = b.r[1];
  b.f[1] = r1 * r1 / 4.0 + r1 * r1 * r1 * r1 / 128.0;
  b.fp[1] = r1 / 2.0 + r1 * r1 * r1 / 32.0;

  for (std::size_t k = 1; k < n; ++k) {
    const double r = b.r[k];
    const double y0 = b.f[k];
    const double v0 = b.fp[k];
    const double k1y = v0;
    const double k1v = detail::bowl_second_derivative(r, v0);
    const double k2y = v0 + 0.5 * h * k1v;
    const double k2v = detail::bowl_second_derivative(r + 0.5 * h, v0 + 0.5 * h * k1v);
    const double k3y = v0 + 0.5 * h * k2v;
    const double k3v = detail::bowl_second_derivative(r + 0.5 * h, v0 + 0.5 * h * k2v);
    const double k4y = v0 + h * k3v;
    const double k4v = detail::bowl_second_derivative(r + h, v0 + h * k3v);
    b.f[k + 1] = y0 + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    b.fp[k + 1] = v0 + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return b;
}

/// f(r) - r^2/2 + log r, the deviation from the leading asymptotics.
inline double bowl_asymptote_deviation(double r, double f) { return f - 0.5 * r * r + std::log(r); }

/// Oscillation (max - min) of f - r^2/2 + log r over the profile nodes in [r_lo, r_hi].
inline double bowl_asymptote_gap(const BowlProfile& b, double r_lo, double r_hi) {
  if (b.size() < 2 || !(r_lo > 0.0) || !(r_hi > r_lo) || r_hi > b.r_max() * (1.0 + 1e-12)) {
    throw ArgumentError("asymptote window [" + std::to_string(r_lo) + ", " + std::to_string(r_hi) +
                        "] is not inside (0, " + std::to_string(b.r_max()) + "]");
  }
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (b.r[k] < r_lo || b.r[k] > r_hi) continue;
    const double g = bowl_asymptote_deviation(b.r[k], b.f[k]);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (lo > hi) {
    throw ArgumentError("asymptote window contains no profile nodes");
  }
  return hi - lo;
}

/// Pointwise |f''/(1+f'^2) + f'/r - 1| at interior profile nodes, f'' from centered
/// differences of the stored slopes. Entry 0 (the axis) is reported as 0.
inline std::vector<double> bowl_ode_residual(const BowlProfile& b) {
  std::vector<double> res(b.size(), 0.0);
  for (std::size_t k = 1; k + 1 < b.size(); ++k) {
    const double fpp = (b.fp[k + 1] - b.fp[k - 1]) / (b.r[k + 1] - b.r[k - 1]);
    res[k] = std::abs(fpp / (1.0 + b.fp[k] * b.fp[k]) + b.fp[k] / b.r[k] - 1.0);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Families as callables (x1, x2) -> x3

struct GrimReaperSurface {
  double operator()(double x1, double /*x2*/) const { return grim_reaper_value(x1); }
};

struct GrimCylinderSurface {
  SolitonParams params;
  double operator()(double x1, double x2) const { return grim_cylinder_value(params, x1, x2); }
};

struct TiltedCylinderSurface {
  TiltedCylinderParams params;
  double operator()(double x1, double x2) const { return tilted_cylinder_value(params, x1, x2); }
};

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes) on
/// increasing abscissae, with prescribed end slopes.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y, double left_slope, double right_slope)
      : x_(std::move(x)), y_(std::move(y)), s_(x_.size()) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw ArgumentError("monotone cubic needs matching samples, at least two");
    for (std::size_t k = 1; k < n; ++k) {
      if (!(x_[k] > x_[k - 1])) throw ArgumentError("monotone cubic abscissae must increase");
    }
    s_.front() = left_slope;
    s_.back() = right_slope;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h0 = x_[k] - x_[k - 1], h1 = x_[k + 1] - x_[k];
      const double d0 = (y_[k] - y_[k - 1]) / h0, d1 = (y_[k + 1] - y_[k]) / h1;
      if (d0 * d1 <= 0.0) {
        s_[k] = 0.0;
      } else {
        const double w0 = 2 * h1 + h0, w1 = h1 + 2 * h0;
        s_[k] = (w0 + w1) / (w0 / d0 + w1 / d1);
      }
    }
  }

  double operator()(double x) const {
    if (x < x_.front() || x > x_.back()) {
      throw DomainError("monotone cubic: " + std::to_string(x) + " is outside the sampled range");
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (k + 1 >= x_.size()) k = x_.size() - 2;
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * s_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] +
           (t3 - t2) * h * s_[k + 1];
  }

 private:
  std::vector<double> x_, y_, s_;
};

/// u(x1, x2) = f(sqrt(x1^2 + x2^2)) by monotone cubic interpolation of (r, f).
class RadialBowlSurface {
 public:
  explicit RadialBowlSurface(const BowlProfile& b)
      : r_max_(b.r_max()), interp_(b.r, b.f, b.fp.empty() ? 0.0 : b.fp.front(), b.fp.empty() ? 0.0 : b.fp.back()) {}

  double operator()(double x1, double x2) const {
    const double r = std::hypot(x1, x2);
    if (r > r_max_) {
      throw DomainError("radial bowl: radius " + std::to_string(r) + " exceeds profile r_max " +
                        std::to_string(r_max_));
    }
    return interp_(r);
  }

  [[nodiscard]] double r_max() const noexcept { return r_max_; }

 private:
  double r_max_;
  MonotoneCubic interp_;
};

/// Pointwise sampling of a closed form on a uniform grid. A domain error at any
/// node is rethrown naming that node.
template <class Surface>
GridFunction sample_to_grid(const Surface& surface, const Rect& domain, std::size_t nx, std::size_t ny) {
  GridSpec spec(domain, nx, ny);
  std::vector<double> values(spec.size());
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double x1 = spec.x1(i);
      const double x2 = spec.x2(j);
      try {
        values[spec.index(i, j)] = surface(x1, x2);
      } catch (const DomainError& e) {
        throw DomainError("node (" + std::to_string(i) + ", " + std::to_string(j) + ") at (" + std::to_string(x1) +
                          ", " + std::to_string(x2) + "): " + e.what());
      }
    }
  }
  return GridFunction(std::move(spec), std::move(values));
}

}  // namespace tlab
