#include "torsionshape/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "torsionshape/error.hpp"
#include "torsionshape/kernels.hpp"

namespace tshape {

using kernels::Exec;

// ---------------------------------------------------------------------------
// Seeds

namespace seeds {

Seed ball(Vec2 c, double r) {
  return {[c, r](Vec2 p) { return norm(p - c) - r; }, true};
}

Seed ellipse(Vec2 c, double a, double b) {
  // First-order distance estimate: F / |grad F| with F = (x/a)^2 + (y/b)^2 - 1.
  return {[c, a, b](Vec2 p) {
            const Vec2 q = p - c;
            const double f = q.x * q.x / (a * a) + q.y * q.y / (b * b) - 1.0;
            const double gx = 2 * q.x / (a * a), gy = 2 * q.y / (b * b);
            const double gn = std::hypot(gx, gy);
            return gn > 1e-12 ? f / gn : -std::min(a, b);
          },
          false};
}

Seed rectangle(Vec2 c, double hx, double hy) {
  return {[c, hx, hy](Vec2 p) {
            const double dx = std::abs(p.x - c.x) - hx, dy = std::abs(p.y - c.y) - hy;
            const double outside = std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
            return outside + std::min(std::max(dx, dy), 0.0);
          },
          true};
}

Seed annulus(Vec2 c, double inner, double outer) {
  return {[c, inner, outer](Vec2 p) {
            const double r = norm(p - c);
            return std::max(r - outer, inner - r);
          },
          true};
}

Seed star(Vec2 c, std::function<double(double)> radius) {
  return {[c, radius = std::move(radius)](Vec2 p) {
            const Vec2 q = p - c;
            return norm(q) - radius(std::atan2(q.y, q.x));
          },
          false};
}

Seed sublevel(const Weight& w, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::BadLevel, "sublevel value must be positive");
  return star({0.0, 0.0}, [w, t](double theta) { return w.sublevel_radius(t, theta); });
}

Seed unite(Seed a, Seed b) {
  return {[a = std::move(a.field), b = std::move(b.field)](Vec2 p) { return std::min(a(p), b(p)); }, false};
}

Seed subtract(Seed a, Seed b) {
  return {[a = std::move(a.field), b = std::move(b.field)](Vec2 p) { return std::max(a(p), -b(p)); }, false};
}

}  // namespace seeds

// ---------------------------------------------------------------------------
// Domain

namespace {
bool is_inside_value(double v) { return v < 0.0; }
}  // namespace

Domain::Domain(NodeField ls, bool signed_distance, bool validate)
    : ls_(std::move(ls)), signed_distance_(signed_distance) {
  if (!validate) return;
  const GridSpec& g = grid();
  const double margin = kMarginCells * g.h() * (1.0 - 1e-9);
  bool any_inside = false;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const double v = ls_(i, j);
      if (v < 0.0) {
        any_inside = true;
      }
      if (g.distance_to_box_edge(g.node(i, j)) < margin && !(v > 0.0))
        throw Error(ErrorCode::OutOfBox, "domain reaches the box margin");
    }
  }
  if (!any_inside) throw Error(ErrorCode::EmptyDomain, "domain has no inside node");
  // Interface points on the grid edges must also keep the margin.
  const double h = g.h();
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const double v = ls_(i, j);
      const Vec2 p = g.node(i, j);
      if (i < g.nx && is_inside_value(v) != is_inside_value(ls_(i + 1, j))) {
        const Vec2 q{p.x + h * v / (v - ls_(i + 1, j)), p.y};
        if (g.distance_to_box_edge(q) < margin) throw Error(ErrorCode::OutOfBox, "interface reaches the box margin");
      }
      if (j < g.ny && is_inside_value(v) != is_inside_value(ls_(i, j + 1))) {
        const Vec2 q{p.x, p.y + h * v / (v - ls_(i, j + 1))};
        if (g.distance_to_box_edge(q) < margin) throw Error(ErrorCode::OutOfBox, "interface reaches the box margin");
      }
    }
  }
}

std::size_t Domain::inside_count() const {
  std::size_t n = 0;
  for (double v : ls_.values()) n += v < 0.0;
  return n;
}

// ---------------------------------------------------------------------------
// Cell geometry: inside pieces of a cell from linear interpolation along the
// cell edges, with the saddle case decided by the cell-centre average.

namespace {

struct CellPiece {
  std::array<Vec2, 6> v{};
  std::array<int, 6> corner{};  // corner index 0..3, or -1 for an edge crossing
  int n = 0;
};

struct CellCorners {
  std::array<Vec2, 4> p;
  std::array<double, 4> ls;
};

CellCorners corners(const NodeField& f, int i, int j) {
  const GridSpec& g = f.grid();
  return {{g.node(i, j), g.node(i + 1, j), g.node(i + 1, j + 1), g.node(i, j + 1)},
          {f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)}};
}

Vec2 crossing(const CellCorners& c, int e) {
  const int a = e, b = (e + 1) % 4;
  const double t = c.ls[a] / (c.ls[a] - c.ls[b]);
  return c.p[a] + t * (c.p[b] - c.p[a]);
}

bool is_in(double v) { return v < 0.0; }

// Returns the number of pieces (0, 1 or 2), vertices in counter-clockwise order.
int cell_pieces(const CellCorners& c, std::array<CellPiece, 2>& out) {
  int mask = 0;
  for (int k = 0; k < 4; ++k) mask |= is_in(c.ls[k]) << k;
  if (mask == 0) return 0;
  const bool saddle = mask == 0b0101 || mask == 0b1010;
  if (saddle) {
    const double centre = 0.25 * (c.ls[0] + c.ls[1] + c.ls[2] + c.ls[3]);
    if (!is_in(centre)) {
      int n = 0;
      for (int k = 0; k < 4; ++k) {
        if (!is_in(c.ls[k])) continue;
        CellPiece& piece = out[n++];
        const int prev = (k + 3) % 4;
        piece.v = {crossing(c, prev), c.p[k], crossing(c, k)};
        piece.corner = {-1, k, -1};
        piece.n = 3;
      }
      return n;
    }
  }
  CellPiece& piece = out[0];
  piece.n = 0;
  for (int k = 0; k < 4; ++k) {
    const int next = (k + 1) % 4;
    const int prev = (k + 3) % 4;
    if (is_in(c.ls[k])) {
      piece.v[piece.n] = c.p[k];
      piece.corner[piece.n++] = k;
    } else if (c.ls[k] == 0.0 && c.ls[prev] == 0.0 && c.ls[next] == 0.0) {
      // Zero corner between two zero corners: on the interface, and no edge
      // crossing lands on it.
      piece.v[piece.n] = c.p[k];
      piece.corner[piece.n++] = -1;
    }
    if (is_in(c.ls[k]) != is_in(c.ls[next])) {
      piece.v[piece.n] = crossing(c, k);
      piece.corner[piece.n++] = -1;
    }
  }
  return 1;
}

double triangle_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

double piece_area(const CellPiece& p) {
  double s = 0.0;
  for (int m = 1; m + 1 < p.n; ++m) s += triangle_area(p.v[0], p.v[m], p.v[m + 1]);
  return s;
}

template <class Fn>
double piece_integral(const CellPiece& p, const Fn& f) {
  double s = 0.0;
  for (int m = 1; m + 1 < p.n; ++m) {
    const Vec2 a = p.v[0], b = p.v[m], c = p.v[m + 1];
    const double area = triangle_area(a, b, c);
    s += area * (f(0.5 * (a + b)) + f(0.5 * (b + c)) + f(0.5 * (c + a))) / 3.0;
  }
  return s;
}

bool full_cell(const CellCorners& c) {
  return is_in(c.ls[0]) && is_in(c.ls[1]) && is_in(c.ls[2]) && is_in(c.ls[3]);
}

struct Segment {
  Vec2 a, b;
  int ci, cj;
};

void cell_segments(const NodeField& f, int i, int j, std::vector<Segment>& out) {
  const CellCorners c = corners(f, i, j);
  std::array<CellPiece, 2> pieces;
  const int np = cell_pieces(c, pieces);
  for (int q = 0; q < np; ++q) {
    const CellPiece& p = pieces[q];
    for (int m = 0; m < p.n; ++m) {
      const int nm = (m + 1) % p.n;
      if (p.corner[m] < 0 && p.corner[nm] < 0) {
        const Vec2 a = p.v[m], b = p.v[nm];
        if (norm(b - a) > 1e-14 * f.grid().h()) out.push_back({a, b, i, j});
      }
    }
  }
}

std::vector<Segment> all_segments(const NodeField& f, Exec exec = Exec::Parallel) {
  const GridSpec& g = f.grid();
  std::vector<std::vector<Segment>> rows(static_cast<std::size_t>(g.ny));
  kernels::for_each_index(
      g.ny,
      [&](int j) {
        for (int i = 0; i < g.nx; ++i) cell_segments(f, i, j, rows[j]);
      },
      exec);
  std::vector<Segment> segs;
  for (auto& r : rows) segs.insert(segs.end(), r.begin(), r.end());
  return segs;
}

}  // namespace

// ---------------------------------------------------------------------------

double volume(const Domain& d) {
  const NodeField& f = d.ls();
  const GridSpec& g = d.grid();
  const double cell = g.h() * g.h();
  return kernels::sum_rows(g.ny, [&](int j) {
    double s = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const CellCorners c = corners(f, i, j);
      if (full_cell(c)) {
        s += cell;
        continue;
      }
      std::array<CellPiece, 2> pieces;
      const int np = cell_pieces(c, pieces);
      for (int q = 0; q < np; ++q) s += piece_area(pieces[q]);
    }
    return s;
  });
}

double integrate(const Domain& d, const std::function<double(Vec2)>& fn) {
  const NodeField& f = d.ls();
  const GridSpec& g = d.grid();
  return kernels::sum_rows(g.ny, [&](int j) {
    double s = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      std::array<CellPiece, 2> pieces;
      const int np = cell_pieces(corners(f, i, j), pieces);
      for (int q = 0; q < np; ++q) s += piece_integral(pieces[q], fn);
    }
    return s;
  });
}

double integrate_nodal(const Domain& d, const NodeField& values, std::optional<double> boundary_value) {
  const NodeField& f = d.ls();
  const GridSpec& g = d.grid();
  if (!(values.grid() == g)) throw Error(ErrorCode::GridMismatch, "field and domain grids differ");
  return kernels::sum_rows(g.ny, [&](int j) {
    double s = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const CellCorners c = corners(f, i, j);
      const std::array<double, 4> val = {values(i, j), values(i + 1, j), values(i + 1, j + 1),
                                         values(i, j + 1)};
      std::array<CellPiece, 2> pieces;
      const int np = cell_pieces(c, pieces);
      for (int q = 0; q < np; ++q) {
        const CellPiece& p = pieces[q];
        std::array<double, 6> pv{};
        for (int m = 0; m < p.n; ++m) {
          if (p.corner[m] >= 0) {
            pv[m] = val[p.corner[m]];
          } else if (boundary_value) {
            pv[m] = *boundary_value;
          } else {
            // Recover the edge and interpolate the nodal values along it.
            const Vec2 v = p.v[m];
            const double fx = (v.x - c.p[0].x) / g.h(), fy = (v.y - c.p[0].y) / g.h();
            pv[m] = (1 - fy) * ((1 - fx) * val[0] + fx * val[1]) + fy * ((1 - fx) * val[3] + fx * val[2]);
          }
        }
        for (int m = 1; m + 1 < p.n; ++m)
          s += triangle_area(p.v[0], p.v[m], p.v[m + 1]) * (pv[0] + pv[m] + pv[m + 1]) / 3.0;
      }
    }
    return s;
  });
}

std::vector<BoundarySample> boundary_samples(const Domain& d) {
  const auto segs = all_segments(d.ls());
  if (segs.empty()) throw Error(ErrorCode::DegenerateBoundary, "no zero crossing in the level set");
  std::vector<BoundarySample> out(segs.size());
  kernels::for_each_index(static_cast<int>(segs.size()), [&](int k) {
    const Segment& s = segs[k];
    BoundarySample b;
    b.a = s.a;
    b.b = s.b;
    b.point = 0.5 * (s.a + s.b);
    b.ds = norm(s.b - s.a);
    // Pieces are walked counter-clockwise, so the outward segment normal is
    // the tangent turned clockwise.
    const Vec2 t = (1.0 / b.ds) * (s.b - s.a);
    const Vec2 seg_normal{t.y, -t.x};
    const Vec2 grad = d.ls().gradient(b.point);
    const double gn = norm(grad);
    b.normal = gn > 1e-12 && dot(grad, seg_normal) > 0.0 ? (1.0 / gn) * grad : seg_normal;
    out[k] = b;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reinitialization

namespace {

constexpr int kExactBand = 3;

// Exact distance to the interface segments for nodes within kExactBand cells;
// infinity elsewhere. Optionally records the nearest segment.
std::vector<double> band_distances(const GridSpec& g, const std::vector<Segment>& segs, int window,
                                   std::vector<int>* nearest) {
  std::vector<double> dist(g.node_count(), std::numeric_limits<double>::infinity());
  if (nearest) nearest->assign(g.node_count(), -1);
  // row-bucketed so each node row can be processed independently
  std::vector<std::vector<int>> by_row(static_cast<std::size_t>(g.ny));
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) by_row[segs[s].cj].push_back(s);
  kernels::for_each_index(g.ny + 1, [&](int j) {
    for (int cj = std::max(0, j - window - 1); cj <= std::min(g.ny - 1, j + window); ++cj) {
      for (int s : by_row[cj]) {
        const Segment& seg = segs[s];
        for (int i = std::max(0, seg.ci - window); i <= std::min(g.nx, seg.ci + window + 1); ++i) {
          const std::size_t k = g.index(i, j);
          const double dd = segment_distance(g.node(i, j), seg.a, seg.b);
          if (dd < dist[k]) {
            dist[k] = dd;
            if (nearest) (*nearest)[k] = s;
          }
        }
      }
    }
  });
  const double limit = window * g.h();
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] > limit) {
      dist[k] = std::numeric_limits<double>::infinity();
      if (nearest) (*nearest)[k] = -1;
    }
  }
  return dist;
}

void fast_march(const GridSpec& g, std::vector<double>& dist) {
  const double h = g.h();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<unsigned char> known(dist.size(), 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    if (dist[k] < inf) {
      known[k] = 1;
    }
  }
  auto update = [&](int i, int j) {
    const std::size_t k = g.index(i, j);
    if (known[k]) return;
    double a = inf, b = inf;
    if (i > 0 && known[g.index(i - 1, j)]) a = std::min(a, dist[g.index(i - 1, j)]);
    if (i < g.nx && known[g.index(i + 1, j)]) a = std::min(a, dist[g.index(i + 1, j)]);
    if (j > 0 && known[g.index(i, j - 1)]) b = std::min(b, dist[g.index(i, j - 1)]);
    if (j < g.ny && known[g.index(i, j + 1)]) b = std::min(b, dist[g.index(i, j + 1)]);
    double t;
    if (a < inf && b < inf && std::abs(a - b) < h) {
      t = 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
    } else {
      t = std::min(a, b) + h;
    }
    if (t < dist[k]) {
      dist[k] = t;
      heap.push({t, k});
    }
  };
  auto neighbours = [&](std::size_t k, auto&& fn) {
    const int i = static_cast<int>(k % (g.nx + 1)), j = static_cast<int>(k / (g.nx + 1));
    if (i > 0) fn(i - 1, j);
    if (i < g.nx) fn(i + 1, j);
    if (j > 0) fn(i, j - 1);
    if (j < g.ny) fn(i, j + 1);
  };
  for (std::size_t k = 0; k < dist.size(); ++k)
    if (known[k]) neighbours(k, update);
  while (!heap.empty()) {
    const auto [t, k] = heap.top();
    heap.pop();
    if (known[k] || t > dist[k]) continue;
    known[k] = 1;
    neighbours(k, update);
  }
}

}  // namespace

Domain reinitialize(const Domain& d) {
  const GridSpec& g = d.grid();
  const auto segs = all_segments(d.ls());
  if (segs.empty()) throw Error(ErrorCode::EmptyDomain, "cannot reinitialize a field without interface");
  auto dist = band_distances(g, segs, kExactBand, nullptr);
  fast_march(g, dist);
  NodeField out(g);
  const auto src = d.ls().values();
  auto dst = out.values();
  for (std::size_t k = 0; k < dist.size(); ++k) dst[k] = src[k] < 0.0 ? -dist[k] : dist[k];
  return Domain(std::move(out), true);
}

std::vector<int> nearest_sample_map(const Domain& d, const std::vector<BoundarySample>& samples,
                                    double max_dist) {
  const GridSpec& g = d.grid();
  std::vector<Segment> segs;
  segs.reserve(samples.size());
  for (const auto& s : samples) {
    const Vec2 m = s.point;
    const int ci = std::clamp(static_cast<int>((m.x - g.x0) / g.h()), 0, g.nx - 1);
    const int cj = std::clamp(static_cast<int>((m.y - g.y0) / g.h()), 0, g.ny - 1);
    segs.push_back({s.a, s.b, ci, cj});
  }
  const int window = static_cast<int>(std::ceil(max_dist / g.h()));
  std::vector<int> nearest;
  band_distances(g, segs, window, &nearest);
  return nearest;
}

Domain build_domain(const GridSpec& grid, const Seed& seed) {
  NodeField f(grid);
  kernels::for_each_index(grid.ny + 1, [&](int j) {
    for (int i = 0; i <= grid.nx; ++i) f(i, j) = seed.field(grid.node(i, j));
  });
  Domain raw(std::move(f), seed.exact_distance);
  return seed.exact_distance ? raw : reinitialize(raw);
}

// ---------------------------------------------------------------------------
// Geometric transforms

namespace {

// Level-set value at an arbitrary point, continued outside the box by the
// distance to the box (a lower bound of the distance to the set).
double sample_extended(const NodeField& f, Vec2 p) {
  const GridSpec& g = f.grid();
  const Vec2 q{std::clamp(p.x, g.x0, g.x1), std::clamp(p.y, g.y0, g.y1)};
  const double v = f.bicubic(q);
  return v + norm(p - q);
}

}  // namespace

Domain scale_domain(const Domain& d, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::BadScale, "scale factor must be positive");
  if (t == 1.0) return d;
  const GridSpec& g = d.grid();
  NodeField out(g);
  const double factor = d.is_signed_distance() ? t : 1.0;
  kernels::for_each_index(g.ny + 1, [&](int j) {
    for (int i = 0; i <= g.nx; ++i) out(i, j) = factor * sample_extended(d.ls(), (1.0 / t) * g.node(i, j));
  });
  return Domain(std::move(out), d.is_signed_distance());
}

namespace {

// Normal offset of a signed-distance domain restoring the target measure; the
// per-line lengths lose O(h^1.5) where lines are tangent to the boundary.
Domain match_volume(Domain d, double target) {
  for (int round = 0; round < 4; ++round) {
    const double v = volume(d);
    if (std::abs(v - target) <= 1e-7 * target) break;
    double perimeter = 0.0;
    for (const auto& s : all_segments(d.ls())) perimeter += norm(s.b - s.a);
    const double shift = (target - v) / perimeter;
    NodeField f = d.ls();
    for (double& x : f.values()) x -= shift;
    d = Domain(std::move(f), true);
  }
  return d;
}

}  // namespace

Domain steiner_symmetrize(const Domain& d, int axis) {
  if (axis != 0 && axis != 1) throw Error(ErrorCode::BadParams, "axis must be 0 or 1");
  const GridSpec& g = d.grid();
  const double h = g.h();
  const NodeField& f = d.ls();
  NodeField out(g);
  // Lines parallel to e_axis: for axis 1 these are the grid columns.
  const int lines = axis == 1 ? g.nx + 1 : g.ny + 1;
  const int len = axis == 1 ? g.ny : g.nx;
  kernels::for_each_index(lines, [&](int line) {
    auto val = [&](int m) { return axis == 1 ? f(line, m) : f(m, line); };
    auto coord = [&](int m) { return axis == 1 ? g.y0 + m * h : g.x0 + m * h; };
    double inside = 0.0;
    for (int m = 0; m < len; ++m) {
      const double a = val(m), b = val(m + 1);
      if (a < 0.0 && b < 0.0) {
        inside += h;
      } else if (a < 0.0) {
        inside += h * a / (a - b);
      } else if (b < 0.0) {
        inside += h * b / (b - a);
      }
    }
    for (int m = 0; m <= len; ++m) {
      const double v = inside > 0.0 ? std::abs(coord(m)) - 0.5 * inside : std::abs(coord(m)) + h;
      if (axis == 1) {
        out(line, m) = v;
      } else {
        out(m, line) = v;
      }
    }
  });
  return match_volume(reinitialize(Domain(std::move(out), false)), volume(d));
}

Domain schwarz_symmetrize(const Domain& d) {
  const double r = std::sqrt(volume(d) / std::numbers::pi);
  return build_domain(d.grid(), seeds::ball({0.0, 0.0}, r));
}

Domain reflect(const Domain& d, int axis) {
  if (axis != 0 && axis != 1) throw Error(ErrorCode::BadParams, "axis must be 0 or 1");
  const GridSpec& g = d.grid();
  NodeField out(g);
  const bool exact_x = std::abs(g.x0 + g.x1) <= 1e-12 * (g.x1 - g.x0);
  const bool exact_y = std::abs(g.y0 + g.y1) <= 1e-12 * (g.y1 - g.y0);
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (axis == 0 && exact_x) {
        out(i, j) = d.ls()(g.nx - i, j);
      } else if (axis == 1 && exact_y) {
        out(i, j) = d.ls()(i, g.ny - j);
      } else {
        Vec2 p = g.node(i, j);
        (axis == 0 ? p.x : p.y) *= -1.0;
        out(i, j) = sample_extended(d.ls(), p);
      }
    }
  }
  return Domain(std::move(out), d.is_signed_distance());
}

double hausdorff_distance(const Domain& d1, const Domain& d2) {
  if (!(d1.grid() == d2.grid())) throw Error(ErrorCode::GridMismatch, "domains live on different grids");
  const auto s1 = boundary_samples(d1);
  const auto s2 = boundary_samples(d2);
  auto directed = [](const std::vector<BoundarySample>& from, const std::vector<BoundarySample>& to) {
    std::vector<double> best(from.size());
    kernels::for_each_index(static_cast<int>(from.size()), [&](int k) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& s : to) m = std::min(m, segment_distance(from[k].point, s.a, s.b));
      best[k] = m;
    });
    return *std::max_element(best.begin(), best.end());
  };
  return std::max(directed(s1, s2), directed(s2, s1));
}

double ray_radius(const Domain& d, double theta) {
  const NodeField& f = d.ls();
  if (!(f.bilinear({0.0, 0.0}) < 0.0)) return 0.0;
  const GridSpec& g = d.grid();
  const Vec2 dir{std::cos(theta), std::sin(theta)};
  const double step = 0.25 * g.h();
  double lo = 0.0;
  double r = step;
  for (;; r += step) {
    const Vec2 p = r * dir;
    if (g.distance_to_box_edge(p) <= 0.0) return r;
    if (!(f.bilinear(p) < 0.0)) break;
    lo = r;
  }
  double hi = r;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f.bilinear(mid * dir) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> ray_radii(const Domain& d, int n_rays) {
  std::vector<double> r(static_cast<std::size_t>(n_rays));
  kernels::for_each_index(n_rays, [&](int k) { r[k] = ray_radius(d, 2.0 * std::numbers::pi * k / n_rays); });
  return r;
}

int inside_components(const Domain& d) {
  const GridSpec& g = d.grid();
  std::vector<int> label(g.node_count(), 0);
  int count = 0;
  std::vector<std::pair<int, int>> stack;
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (!d.inside(i, j) || label[g.index(i, j)]) continue;
      ++count;
      stack.push_back({i, j});
      label[g.index(i, j)] = count;
      while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const int nb[4][2] = {{a - 1, b}, {a + 1, b}, {a, b - 1}, {a, b + 1}};
        for (const auto& n : nb) {
          if (n[0] < 0 || n[0] > g.nx || n[1] < 0 || n[1] > g.ny) continue;
          const std::size_t k = g.index(n[0], n[1]);
          if (label[k] || !d.inside(n[0], n[1])) continue;
          label[k] = count;
          stack.push_back({n[0], n[1]});
        }
      }
    }
  }
  return count;
}

}  // namespace tshape
