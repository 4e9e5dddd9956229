#include "torsionshape/grid.hpp"

#include <algorithm>
#include <cmath>

#include "torsionshape/error.hpp"

namespace tshape {

GridSpec::GridSpec(int nx_, int ny_, double x0_, double y0_, double x1_, double y1_)
    : nx(nx_), ny(ny_), x0(x0_), y0(y0_), x1(x1_), y1(y1_) {
  if (nx < 16 || ny < 16) throw Error(ErrorCode::BadGrid, "grid needs at least 16 cells per direction");
  if (!(x1 > x0) || !(y1 > y0)) throw Error(ErrorCode::BadGrid, "box corners out of order");
  if (!(x0 < 0.0 && x1 > 0.0 && y0 < 0.0 && y1 > 0.0))
    throw Error(ErrorCode::BadGrid, "box must contain the origin strictly inside");
  const double hx = (x1 - x0) / nx;
  const double hy = (y1 - y0) / ny;
  if (std::abs(hx - hy) > 1e-12 * hx) throw Error(ErrorCode::BadGrid, "grid spacing must be uniform");
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
  try {
    const int nx = j.at("nx").get<int>();
    const int ny = j.value("ny", nx);
    const auto box = j.at("box").get<std::vector<double>>();
    if (box.size() != 4) throw Error(ErrorCode::ConfigParse, "grid.box needs [x0, y0, x1, y1]");
    return GridSpec(nx, ny, box[0], box[1], box[2], box[3]);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("grid: ") + e.what());
  }
}

nlohmann::json GridSpec::to_json() const {
  return {{"nx", nx}, {"ny", ny}, {"box", {x0, y0, x1, y1}}};
}

double GridSpec::distance_to_box_edge(Vec2 p) const {
  return std::min({p.x - x0, x1 - p.x, p.y - y0, y1 - p.y});
}

namespace {

struct CellCoord {
  int i, j;
  double fx, fy;
};

CellCoord locate(const GridSpec& g, Vec2 p) {
  const double h = g.h();
  double sx = std::clamp((p.x - g.x0) / h, 0.0, static_cast<double>(g.nx));
  double sy = std::clamp((p.y - g.y0) / h, 0.0, static_cast<double>(g.ny));
  int i = std::min(static_cast<int>(sx), g.nx - 1);
  int j = std::min(static_cast<int>(sy), g.ny - 1);
  return {i, j, sx - i, sy - j};
}

double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

double NodeField::bilinear(Vec2 p) const {
  const auto c = locate(grid_, p);
  const double v00 = (*this)(c.i, c.j), v10 = (*this)(c.i + 1, c.j);
  const double v01 = (*this)(c.i, c.j + 1), v11 = (*this)(c.i + 1, c.j + 1);
  return (1 - c.fy) * ((1 - c.fx) * v00 + c.fx * v10) + c.fy * ((1 - c.fx) * v01 + c.fx * v11);
}

double NodeField::bicubic(Vec2 p) const {
  const auto c = locate(grid_, p);
  auto at = [&](int i, int j) {
    return (*this)(std::clamp(i, 0, grid_.nx), std::clamp(j, 0, grid_.ny));
  };
  double col[4];
  for (int m = 0; m < 4; ++m) {
    const int j = c.j - 1 + m;
    col[m] = catmull_rom(at(c.i - 1, j), at(c.i, j), at(c.i + 1, j), at(c.i + 2, j), c.fx);
  }
  return catmull_rom(col[0], col[1], col[2], col[3], c.fy);
}

Vec2 NodeField::gradient(Vec2 p) const {
  const auto c = locate(grid_, p);
  const double h = grid_.h();
  auto node_grad = [&](int i, int j) {
    const int il = std::max(i - 1, 0), ir = std::min(i + 1, grid_.nx);
    const int jl = std::max(j - 1, 0), jr = std::min(j + 1, grid_.ny);
    return Vec2{((*this)(ir, j) - (*this)(il, j)) / ((ir - il) * h),
                ((*this)(i, jr) - (*this)(i, jl)) / ((jr - jl) * h)};
  };
  const Vec2 g00 = node_grad(c.i, c.j), g10 = node_grad(c.i + 1, c.j);
  const Vec2 g01 = node_grad(c.i, c.j + 1), g11 = node_grad(c.i + 1, c.j + 1);
  return (1 - c.fy) * ((1 - c.fx) * g00 + c.fx * g10) + c.fy * ((1 - c.fx) * g01 + c.fx * g11);
}

}  // namespace tshape
