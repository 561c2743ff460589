#pragma once

// Finite-difference differential geometry of a graph x3 = u(x1, x2) sampled on a
// uniform grid. All derivative stencils are centered and second order; the outer
// ring of nodes (and two rings for quantities differentiated twice) is untrusted.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tlab/errors.hpp"
#include "tlab/grid.hpp"

namespace tlab {

struct Hessian2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Centered first and second differences at every interior node.
struct Partials {
  GridSpec spec;
  NodeField u1, u2, u11, u12, u22;
};

inline Partials partials(const GridFunction& u) {
  const GridSpec& s = u.spec();
  if (s.nx() < 5 || s.ny() < 5) {
    throw ArgumentError("partials need a grid of at least 5x5 nodes, got " + std::to_string(s.nx()) + "x" +
                        std::to_string(s.ny()));
  }
  const double h1 = s.h1();
  const double h2 = s.h2();
  Partials d{s, NodeField(s), NodeField(s), NodeField(s), NodeField(s), NodeField(s)};
  for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
      const double c = u(i, j);
      const double e = u(i + 1, j), w = u(i - 1, j), n = u(i, j + 1), so = u(i, j - 1);
      d.u1(i, j) = (e - w) / (2.0 * h1);
      d.u2(i, j) = (n - so) / (2.0 * h2);
      d.u11(i, j) = (e - 2.0 * c + w) / (h1 * h1);
      d.u22(i, j) = (n - 2.0 * c + so) / (h2 * h2);
      d.u12(i, j) = (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) / (4.0 * h1 * h2);
    }
  }
  return d;
}

/// Geometry of the graph at one point, from its gradient and Hessian.
struct NodeGeometry {
  double u1 = 0.0, u2 = 0.0;
  Hessian2 hess;
  double W = 1.0;
  std::array<double, 3> normal{0.0, 0.0, 1.0};
  double H = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double A2 = 0.0;
  double K = 0.0;
  /// phi(kappa2/kappa1) when kappa1 > 0, NaN otherwise.
  double pinch = std::numeric_limits<double>::quiet_NaN();
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Shape operator S = g^{-1} h with g = I + grad grad^T and h = hess / W.
inline Matrix2 shape_operator(double u1, double u2, const Hessian2& hs) {
  const double w2 = 1.0 + u1 * u1 + u2 * u2;
  const double w = std::sqrt(w2);
  const double gi11 = 1.0 - u1 * u1 / w2, gi12 = -u1 * u2 / w2, gi22 = 1.0 - u2 * u2 / w2;
  const double h11 = hs.xx / w, h12 = hs.xy / w, h22 = hs.yy / w;
  return {{{gi11 * h11 + gi12 * h12, gi11 * h12 + gi12 * h22}, {gi12 * h11 + gi22 * h12, gi12 * h12 + gi22 * h22}}};
}

/// phi(kappa2/kappa1) with phi(r) = r^4 exp(-1/r^2) for r < 0 and 0 otherwise.
inline double pinching_ratio(double kappa1, double kappa2) {
  if (!(kappa1 > 0.0)) {
    throw ArgumentError("pinching ratio needs kappa1 > 0, got " + std::to_string(kappa1));
  }
  const double r = kappa2 / kappa1;
  if (!(r < 0.0)) return 0.0;
  const double exponent = -1.0 / (r * r);
  if (exponent < -745.0) return 0.0;
  const double r2 = r * r;
  return r2 * r2 * std::exp(exponent);
}

/// Principal curvatures, ordered kappa1 >= kappa2, as eigenvalues of the symmetric
/// matrix g^{-1/2} h g^{-1/2}, which is similar to the shape operator.
inline std::array<double, 2> principal_curvatures(double u1, double u2, const Hessian2& hs) {
  const double w = std::sqrt(1.0 + u1 * u1 + u2 * u2);
  // g^{-1/2} = I - c p p^T with c = 1/(W(W+1)); regular at p = 0.
  const double c = 1.0 / (w * (w + 1.0));
  const double g11 = 1.0 - c * u1 * u1, g12 = -c * u1 * u2, g22 = 1.0 - c * u2 * u2;
  const double h11 = hs.xx / w, h12 = hs.xy / w, h22 = hs.yy / w;
  // M = G h G
  const double a11 = g11 * h11 + g12 * h12, a12 = g11 * h12 + g12 * h22;
  const double a21 = g12 * h11 + g22 * h12, a22 = g12 * h12 + g22 * h22;
  const double m11 = a11 * g11 + a12 * g12;
  const double m12 = 0.5 * ((a11 * g12 + a12 * g22) + (a21 * g11 + a22 * g12));
  const double m22 = a21 * g12 + a22 * g22;

  const double mean = 0.5 * (m11 + m22);
  const double radius = std::hypot(0.5 * (m11 - m22), m12);
  const double det = (hs.xx * hs.yy - hs.xy * hs.xy) / (w * w * w * w);
  double k1 = mean + radius;
  double k2 = mean - radius;
  // Recover the smaller-magnitude root from the product to avoid cancellation.
  if (mean > 0.0 && k1 != 0.0) {
    k2 = det / k1;
  } else if (mean < 0.0 && k2 != 0.0) {
    k1 = det / k2;
  }
  if (k2 > k1) std::swap(k1, k2);
  return {k1, k2};
}

inline NodeGeometry node_geometry(double u1, double u2, const Hessian2& hs) {
  NodeGeometry g;
  g.u1 = u1;
  g.u2 = u2;
  g.hess = hs;
  g.W = std::sqrt(1.0 + u1 * u1 + u2 * u2);
  g.normal = {-u1 / g.W, -u2 / g.W, 1.0 / g.W};
  const auto [k1, k2] = principal_curvatures(u1, u2, hs);
  g.kappa1 = k1;
  g.kappa2 = k2;
  g.H = k1 + k2;
  g.K = k1 * k2;
  g.A2 = k1 * k1 + k2 * k2;
  if (k1 > 0.0) g.pinch = pinching_ratio(k1, k2);
  return g;
}

/// Mean curvature from the divergence form: (LHS of the nondivergence translator operator) / W^3.
inline double mean_curvature_divergence_form(double u1, double u2, const Hessian2& hs) {
  const double w = std::sqrt(1.0 + u1 * u1 + u2 * u2);
  return ((1.0 + u2 * u2) * hs.xx - 2.0 * u1 * u2 * hs.xy + (1.0 + u1 * u1) * hs.yy) / (w * w * w);
}

/// Per-node geometry of a sampled graph; only nodes with spec.is_interior(i, j) are meaningful.
struct GeometryFields {
  GridSpec spec;
  std::vector<NodeGeometry> nodes;

  [[nodiscard]] const NodeGeometry& at(std::size_t i, std::size_t j) const { return nodes[spec.index(i, j)]; }
  [[nodiscard]] NodeGeometry& at(std::size_t i, std::size_t j) { return nodes[spec.index(i, j)]; }

  template <class Proj>
  [[nodiscard]] NodeField field(Proj proj) const {
    NodeField out(spec);
    for (std::size_t k = 0; k < nodes.size(); ++k) out.data[k] = proj(nodes[k]);
    return out;
  }
};

inline GeometryFields geometry_fields(const Partials& d) {
  GeometryFields g{d.spec, std::vector<NodeGeometry>(d.spec.size())};
  for (std::size_t j = 1; j + 1 < d.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < d.spec.nx(); ++i) {
      g.at(i, j) = node_geometry(d.u1(i, j), d.u2(i, j), {d.u11(i, j), d.u12(i, j), d.u22(i, j)});
    }
  }
  return g;
}

inline GeometryFields geometry_fields(const GridFunction& u) { return geometry_fields(partials(u)); }

/// LHS - RHS of (1+u2^2)u11 - 2u1u2u12 + (1+u1^2)u22 = 1 + u1^2 + u2^2.
inline double translator_operator(double u1, double u2, const Hessian2& hs) {
  return (1.0 + u2 * u2) * hs.xx - 2.0 * u1 * u2 * hs.xy + (1.0 + u1 * u1) * hs.yy - (1.0 + u1 * u1 + u2 * u2);
}

/// Translator residual at interior nodes (boundary entries are 0).
inline NodeField translator_residual(const Partials& d) {
  NodeField res(d.spec);
  for (std::size_t j = 1; j + 1 < d.spec.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < d.spec.nx(); ++i) {
      res(i, j) = translator_operator(d.u1(i, j), d.u2(i, j), {d.u11(i, j), d.u12(i, j), d.u22(i, j)});
    }
  }
  return res;
}

inline NodeField translator_residual(const GridFunction& u) { return translator_residual(partials(u)); }

/// Location and value of the largest |field| over nodes at least `depth` from the edge.
struct FieldExtreme {
  double value = 0.0;
  Node where{};
};

inline FieldExtreme max_abs(const NodeField& f, std::size_t depth = 1) {
  FieldExtreme best{-1.0, {}};
  for (std::size_t j = 0; j < f.spec.ny(); ++j) {
    for (std::size_t i = 0; i < f.spec.nx(); ++i) {
      if (!f.spec.is_interior(i, j, depth)) continue;
      const double v = std::abs(f(i, j));
      if (v > best.value || std::isnan(v)) best = {v, {i, j}};
      if (std::isnan(v)) return best;
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

/// Residual grids of three translator identities; (a) is trusted one node deep,
/// (b) and (c) two nodes deep because they difference derived fields.
struct DriftResiduals {
  /// |grad^Sigma x3|^2 - (1 - H^2) with H = <N, e3> = 1/W.
  NodeField tangential;
  /// a^{ij} H_ij + H |A|^2, the drift Laplacian of H on the graph.
  NodeField drift_H;
  /// a^{ij} W_ij - (2/W) a^{ij} W_i W_j - |A|^2 W.
  NodeField drift_W;
};

inline DriftResiduals drift_identity_residuals(const GeometryFields& g) {
  const GridSpec& s = g.spec;
  if (s.nx() < 5 || s.ny() < 5) {
    throw ArgumentError("drift identities need a grid of at least 5x5 nodes");
  }
  DriftResiduals out{NodeField(s), NodeField(s), NodeField(s)};
  for (std::size_t j = 1; j + 1 < s.ny(); ++j) {
    for (std::size_t i = 1; i + 1 < s.nx(); ++i) {
      const NodeGeometry& n = g.at(i, j);
      const double grad2 = n.u1 * n.u1 + n.u2 * n.u2;
      const double w2 = n.W * n.W;
      out.tangential(i, j) = grad2 / w2 - (1.0 - 1.0 / w2);
    }
  }
  const double h1 = s.h1();
  const double h2 = s.h2();
  auto second = [&](auto get, std::size_t i, std::size_t j) {
    const double c = get(g.at(i, j));
    const double e = get(g.at(i + 1, j)), w = get(g.at(i - 1, j));
    const double n = get(g.at(i, j + 1)), so = get(g.at(i, j - 1));
    struct {
      double d1, d2, d11, d12, d22;
    } r{(e - w) / (2 * h1), (n - so) / (2 * h2), (e - 2 * c + w) / (h1 * h1), 0.0, (n - 2 * c + so) / (h2 * h2)};
    r.d12 = (get(g.at(i + 1, j + 1)) - get(g.at(i + 1, j - 1)) - get(g.at(i - 1, j + 1)) + get(g.at(i - 1, j - 1))) /
            (4 * h1 * h2);
    return r;
  };
  for (std::size_t j = 2; j + 2 < s.ny(); ++j) {
    for (std::size_t i = 2; i + 2 < s.nx(); ++i) {
      const NodeGeometry& n = g.at(i, j);
      const double w2 = n.W * n.W;
      const double a11 = 1.0 - n.u1 * n.u1 / w2, a12 = -n.u1 * n.u2 / w2, a22 = 1.0 - n.u2 * n.u2 / w2;
      const auto dH = second([](const NodeGeometry& x) { return x.H; }, i, j);
      out.drift_H(i, j) = a11 * dH.d11 + 2.0 * a12 * dH.d12 + a22 * dH.d22 + n.H * n.A2;
      const auto dW = second([](const NodeGeometry& x) { return x.W; }, i, j);
      const double aWW = a11 * dW.d1 * dW.d1 + 2.0 * a12 * dW.d1 * dW.d2 + a22 * dW.d2 * dW.d2;
      out.drift_W(i, j) = a11 * dW.d11 + 2.0 * a12 * dW.d12 + a22 * dW.d22 - 2.0 / n.W * aWW - n.A2 * n.W;
    }
  }
  return out;
}

/// Length of the polygon through the graph points over a 4-connected node path;
/// an upper bound for the intrinsic distance between its endpoints.
inline double path_intrinsic_length(const GridFunction& u, std::span<const Node> path) {
  const GridSpec& s = u.spec();
  double len = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const Node& b = path[k];
    if (b.i >= s.nx() || b.j >= s.ny()) {
      throw ArgumentError("path node (" + std::to_string(b.i) + ", " + std::to_string(b.j) + ") is off the grid");
    }
    if (k == 0) continue;
    const Node& a = path[k - 1];
    const std::size_t di = a.i > b.i ? a.i - b.i : b.i - a.i;
    const std::size_t dj = a.j > b.j ? a.j - b.j : b.j - a.j;
    if (di + dj != 1) {
      throw ArgumentError("path step " + std::to_string(k) + " is not between 4-adjacent nodes");
    }
    const double h = di == 1 ? s.h1() : s.h2();
    len += std::hypot(h, u(b.i, b.j) - u(a.i, a.j));
  }
  return len;
}

}  // namespace tlab
