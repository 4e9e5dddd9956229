#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "torsionshape/vec2.hpp"

namespace tshape {

/// Uniform Cartesian node grid over [x0, x1] x [y0, y1] with nx by ny cells.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  GridSpec() = default;
  GridSpec(int nx, int ny, double x0, double y0, double x1, double y1);

  static GridSpec square(int n, double half_width) {
    return GridSpec(n, n, -half_width, -half_width, half_width, half_width);
  }
  static GridSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  double h() const { return (x1 - x0) / nx; }
  int nodes_x() const { return nx + 1; }
  int nodes_y() const { return ny + 1; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx + 1) + static_cast<std::size_t>(i);
  }
  Vec2 node(int i, int j) const { return {x0 + i * h(), y0 + j * h()}; }
  /// Distance from p to the nearest side of the box (negative outside).
  double distance_to_box_edge(Vec2 p) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Node-centred scalar field.
class NodeField {
 public:
  NodeField() = default;
  explicit NodeField(const GridSpec& grid, double fill = 0.0)
      : grid_(grid), values_(grid.node_count(), fill) {}

  const GridSpec& grid() const { return grid_; }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Bilinear interpolation; coordinates are clamped to the box.
  double bilinear(Vec2 p) const;
  /// Catmull-Rom bicubic interpolation; coordinates are clamped to the box.
  double bicubic(Vec2 p) const;
  /// Central-difference node gradients, bilinearly interpolated.
  Vec2 gradient(Vec2 p) const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

}  // namespace tshape
