#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tlab/errors.hpp"

namespace tlab {

/// Axis-aligned rectangle [x1_min, x1_max] x [x2_min, x2_max].
struct Rect {
  double x1_min = 0.0;
  double x1_max = 1.0;
  double x2_min = 0.0;
  double x2_max = 1.0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Node index: i runs along x1, j along x2.
struct Node {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Uniform tensor grid layout. Storage is row-major with x2 rows: index = j*nx + i.
class GridSpec {
 public:
  GridSpec() = default;

  GridSpec(Rect domain, std::size_t nx, std::size_t ny) : domain_(domain), nx_(nx), ny_(ny) {
    if (nx < 3 || ny < 3) {
      throw ArgumentError("grid needs at least 3 nodes per direction, got " + std::to_string(nx) +
                          "x" + std::to_string(ny));
    }
    if (!(domain.x1_max > domain.x1_min) || !(domain.x2_max > domain.x2_min)) {
      throw ArgumentError("grid rectangle must have positive extent in both directions");
    }
  }

  [[nodiscard]] const Rect& domain() const noexcept { return domain_; }
  [[nodiscard]] std::size_t nx() const noexcept { return nx_; }
  [[nodiscard]] std::size_t ny() const noexcept { return ny_; }
  [[nodiscard]] std::size_t size() const noexcept { return nx_ * ny_; }

  [[nodiscard]] double h1() const noexcept {
    return (domain_.x1_max - domain_.x1_min) / static_cast<double>(nx_ - 1);
  }
  [[nodiscard]] double h2() const noexcept {
    return (domain_.x2_max - domain_.x2_min) / static_cast<double>(ny_ - 1);
  }

  // The last node is pinned to the upper bound so coordinates are exact at both ends.
  [[nodiscard]] double x1(std::size_t i) const noexcept {
    return i + 1 == nx_ ? domain_.x1_max : domain_.x1_min + static_cast<double>(i) * h1();
  }
  [[nodiscard]] double x2(std::size_t j) const noexcept {
    return j + 1 == ny_ ? domain_.x2_max : domain_.x2_min + static_cast<double>(j) * h2();
  }

  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
    return j * nx_ + i;
  }

  /// True for nodes at least `depth` nodes away from every edge.
  [[nodiscard]] bool is_interior(std::size_t i, std::size_t j, std::size_t depth = 1) const noexcept {
    return i >= depth && j >= depth && i + depth < nx_ && j + depth < ny_;
  }

  [[nodiscard]] bool on_boundary(std::size_t i, std::size_t j) const noexcept {
    return !is_interior(i, j, 1);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  Rect domain_{};
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
};

/// A scalar function sampled on a GridSpec; the discrete soliton graph x3 = u(x1, x2).
class GridFunction {
 public:
  GridFunction() = default;

  explicit GridFunction(GridSpec spec, double fill = 0.0)
      : spec_(std::move(spec)), values_(spec_.size(), fill) {}

  GridFunction(GridSpec spec, std::vector<double> values) : spec_(std::move(spec)), values_(std::move(values)) {
    if (values_.size() != spec_.size()) {
      throw ArgumentError("grid value count " + std::to_string(values_.size()) + " does not match " +
                          std::to_string(spec_.nx()) + "x" + std::to_string(spec_.ny()));
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (!std::isfinite(values_[k])) {
        throw ArgumentError("non-finite grid value at node (" + std::to_string(k % spec_.nx()) + ", " +
                            std::to_string(k / spec_.nx()) + ")");
      }
    }
  }

  [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::size_t nx() const noexcept { return spec_.nx(); }
  [[nodiscard]] std::size_t ny() const noexcept { return spec_.ny(); }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[spec_.index(i, j)];
  }
  [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept {
    return values_[spec_.index(i, j)];
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

 private:
  GridSpec spec_{};
  std::vector<double> values_;
};

/// Per-node scalar field on a grid layout; entries outside the trusted region are unspecified.
struct NodeField {
  GridSpec spec;
  std::vector<double> data;

  NodeField() = default;
  explicit NodeField(GridSpec s, double fill = 0.0) : spec(std::move(s)), data(spec.size(), fill) {}

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data[spec.index(i, j)]; }
  [[nodiscard]] double& operator()(std::size_t i, std::size_t j) noexcept { return data[spec.index(i, j)]; }
};

}  // namespace tlab
