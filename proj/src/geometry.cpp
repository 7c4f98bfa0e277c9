#include "bma/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace bma {

ConvexDomain ConvexDomain::disk(Vec2 c, double r) {
  if (r <= 0) throw Error(ErrorKind::Config, "disk radius must be positive");
  return {DomainKind::Disk, c, r, r, 0.0};
}

ConvexDomain ConvexDomain::ellipse(Vec2 c, double ax_, double ay_, double rot) {
  if (ax_ <= 0 || ay_ <= 0)
    throw Error(ErrorKind::Config, "ellipse semi-axes must be positive");
  return {DomainKind::Ellipse, c, ax_, ay_, rot};
}

Vec2 ConvexDomain::to_canonical(Vec2 p) const {
  Vec2 d = p - center;
  if (rotation == 0.0) return d;
  return Mat2::rotation(-rotation).apply(d);
}

Vec2 ConvexDomain::from_canonical(Vec2 q) const {
  if (rotation != 0.0) q = Mat2::rotation(rotation).apply(q);
  return q + center;
}

double ConvexDomain::level(Vec2 p) const {
  Vec2 q = to_canonical(p);
  double u = q.x / ax, v = q.y / ay;
  return u * u + v * v - 1.0;
}

Vec2 ConvexDomain::boundary_point(double t) const {
  return from_canonical({ax * std::cos(t), ay * std::sin(t)});
}

Vec2 ConvexDomain::project_to_boundary(Vec2 p) const {
  Vec2 q = to_canonical(p);
  if (kind == DomainKind::Disk || ax == ay) {
    double n = q.norm();
    if (n == 0) return from_canonical({ax, 0});
    return from_canonical(q * (ax / n));
  }
  // minimize |B(t)-q|^2 over the boundary parameter
  double t = std::atan2(q.y / ay, q.x / ax);
  for (int it = 0; it < 60; ++it) {
    double c = std::cos(t), s = std::sin(t);
    Vec2 b{ax * c, ay * s};
    Vec2 bp{-ax * s, ay * c};
    Vec2 bpp{-ax * c, -ay * s};
    double g = (b - q).dot(bp);
    double gg = bp.dot(bp) + (b - q).dot(bpp);
    if (gg <= 0) gg = bp.dot(bp);
    double step = g / gg;
    t -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return from_canonical({ax * std::cos(t), ay * std::sin(t)});
}

Vec2 ConvexDomain::inward_normal(Vec2 x) const {
  Vec2 pb = project_to_boundary(x);
  if ((x - pb).norm() > boundary_tol())
    throw Error(ErrorKind::Domain, "inward_normal: point is not on the boundary");
  Vec2 q = to_canonical(pb);
  Vec2 grad_canon{2.0 * q.x / (ax * ax), 2.0 * q.y / (ay * ay)};
  Vec2 grad = rotation == 0.0 ? grad_canon
                              : Mat2::rotation(rotation).apply(grad_canon);
  return (-grad).normalized();
}

double ConvexDomain::max_curvature_radius() const {
  double a = std::max(ax, ay), b = std::min(ax, ay);
  return a * a / b;
}

double ConvexDomain::min_curvature() const {
  double a = std::max(ax, ay), b = std::min(ax, ay);
  return b / (a * a);
}

Vec2 CutSurface::endpoint_a() const {
  return axis == 1 ? Vec2{lo, level} : Vec2{level, lo};
}
Vec2 CutSurface::endpoint_b() const {
  return axis == 1 ? Vec2{hi, level} : Vec2{level, hi};
}
Vec2 CutSurface::positive_normal() const {
  return axis == 1 ? Vec2{0.0, static_cast<double>(positive)}
                   : Vec2{static_cast<double>(positive), 0.0};
}

static std::vector<Vec2> compute_branch_points(const CutSurface& cut,
                                               const Region& region) {
  std::vector<Vec2> bp;
  for (Vec2 e : {cut.endpoint_a(), cut.endpoint_b()})
    if (region.contains(e)) bp.push_back(e);
  return bp;
}

CutSurface CutSurface::from_segment(Vec2 p, Vec2 q, Vec2 normal,
                                    const Region& region) {
  CutSurface cut;
  cut.tol = 1e-12 * region.outer.diameter();
  if (std::abs(p.y - q.y) <= cut.tol) {
    cut.axis = 1;
    cut.level = 0.5 * (p.y + q.y);
    cut.lo = std::min(p.x, q.x);
    cut.hi = std::max(p.x, q.x);
    cut.positive = normal.y >= 0 ? +1 : -1;
    if (std::abs(normal.x) > 1e-9)
      throw Error(ErrorKind::Config, "cut normal must be orthogonal to the cut");
  } else if (std::abs(p.x - q.x) <= cut.tol) {
    cut.axis = 0;
    cut.level = 0.5 * (p.x + q.x);
    cut.lo = std::min(p.y, q.y);
    cut.hi = std::max(p.y, q.y);
    cut.positive = normal.x >= 0 ? +1 : -1;
    if (std::abs(normal.y) > 1e-9)
      throw Error(ErrorKind::Config, "cut normal must be orthogonal to the cut");
  } else {
    throw Error(ErrorKind::Config, "cut must be grid-aligned (axis-parallel)");
  }
  if (cut.hi - cut.lo <= cut.tol)
    throw Error(ErrorKind::Config, "cut segment is degenerate");
  cut.branch_points = compute_branch_points(cut, region);
  return cut;
}

CutSurface CutSurface::snapped(Vec2 org, double h, const Region& region) const {
  auto snap_dual = [&](double v, double o) {
    return o + (std::floor((v - o) / h) + 0.5) * h;
  };
  CutSurface s = *this;
  double o_level = axis == 1 ? org.y : org.x;
  double o_span = axis == 1 ? org.x : org.y;
  s.level = snap_dual(level, o_level);
  s.lo = snap_dual(lo, o_span);
  s.hi = snap_dual(hi, o_span);
  if (s.hi <= s.lo)
    throw Error(ErrorKind::Config, "cut collapses under grid snapping");
  s.branch_points = compute_branch_points(s, region);
  return s;
}

int CutSurface::crossing(Vec2 a, Vec2 b) const {
  double fa = axis == 1 ? a.y : a.x;
  double fb = axis == 1 ? b.y : b.x;
  double sa = fa - level, sb = fb - level;
  if (sa == 0.0 || sb == 0.0 || (sa > 0) == (sb > 0)) {
    // No transversal crossing of the cut line. Still guard the branch set:
    // a segment running along the line could pass near an endpoint.
    for (const Vec2& bp : branch_points) {
      Vec2 d = b - a;
      double L2 = d.norm2();
      double t = L2 > 0 ? std::clamp((bp - a).dot(d) / L2, 0.0, 1.0) : 0.0;
      if ((a + d * t - bp).norm() < tol)
        throw Error(ErrorKind::BranchCollision, "segment hits branch point");
    }
    return 0;
  }
  double t = sa / (sa - sb);
  double span = axis == 1 ? a.x + t * (b.x - a.x) : a.y + t * (b.y - a.y);
  for (const Vec2& bp : branch_points) {
    double bspan = axis == 1 ? bp.x : bp.y;
    if (std::abs(span - bspan) < tol)
      throw Error(ErrorKind::BranchCollision, "segment hits branch point");
  }
  if (span <= lo || span >= hi) return 0;
  int dir = sb > sa ? +1 : -1;  // direction of travel along the cut axis
  return dir * positive;
}

int CutSurface3::crossing(const double a[3], const double b[3]) const {
  double sa = a[plane_axis] - level3, sb = b[plane_axis] - level3;
  if (sa == 0.0 || sb == 0.0 || (sa > 0) == (sb > 0)) return 0;
  double t = sa / (sa - sb);
  int u = (plane_axis + 1) % 3, v = (plane_axis + 2) % 3;
  double pu = a[u] + t * (b[u] - a[u]);
  double pv = a[v] + t * (b[v] - a[v]);
  double d = std::hypot(pu - cx, pv - cy);
  if (std::abs(d - radius3) < tol)
    throw Error(ErrorKind::BranchCollision, "segment hits branch circle");
  if (d >= radius3) return 0;
  int dir = sb > sa ? +1 : -1;
  return dir * positive;
}

GridSpec GridSpec::cover_region(const Region& r, int n_per_axis,
                                double margin_cells) {
  const ConvexDomain& d = r.outer;
  double ext = std::max(d.ax, d.ay);
  // square box centered on the domain, n nodes per axis
  double half = ext;
  double h = 2.0 * half / (n_per_axis - 1 - 2.0 * margin_cells);
  GridSpec g;
  g.h = h;
  g.nx = g.ny = n_per_axis;
  g.origin = {d.center.x - half - margin_cells * h,
              d.center.y - half - margin_cells * h};
  return g;
}

BaseGrid BaseGrid::build(const Region& region, const GridSpec& spec,
                         const std::vector<CutSurface>& cuts) {
  BaseGrid g;
  g.spec = spec;
  g.region = region;
  g.cls.assign(static_cast<size_t>(spec.count()), NodeClass::Outside);
  g.boundary_proj.assign(static_cast<size_t>(spec.count()), Vec2{});
  g.near_cut.assign(static_cast<size_t>(spec.count()), 0);

  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i)
      if (region.contains(spec.pos(i, j)))
        g.cls[static_cast<size_t>(spec.id(i, j))] = NodeClass::Interior;

  // boundary layer: first outside ring, axis-adjacent to an interior node
  for (int j = 0; j < spec.ny; ++j)
    for (int i = 0; i < spec.nx; ++i) {
      int id = spec.id(i, j);
      if (g.cls[static_cast<size_t>(id)] != NodeClass::Outside) continue;
      bool adj = false;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4 && !adj; ++k) {
        int ii = i + di[k], jj = j + dj[k];
        if (spec.in_lattice(ii, jj) &&
            g.cls[static_cast<size_t>(spec.id(ii, jj))] == NodeClass::Interior)
          adj = true;
      }
      if (!adj) continue;
      g.cls[static_cast<size_t>(id)] = NodeClass::Boundary;
      Vec2 p = spec.pos(i, j);
      if (region.in_hole(p)) {
        Vec2 c = region.outer.center;
        Vec2 d = p - c;
        double n = d.norm();
        g.boundary_proj[static_cast<size_t>(id)] =
            n > 0 ? c + d * (*region.hole_radius / n)
                  : c + Vec2{*region.hole_radius, 0};
      } else {
        g.boundary_proj[static_cast<size_t>(id)] =
            region.outer.project_to_boundary(p);
      }
    }

  for (const CutSurface& cut : cuts) {
    for (int j = 0; j < spec.ny; ++j)
      for (int i = 0; i < spec.nx; ++i) {
        Vec2 p = spec.pos(i, j);
        double dl = (cut.axis == 1 ? p.y : p.x) - cut.level;
        double sp = cut.axis == 1 ? p.x : p.y;
        bool near = std::abs(dl) <= spec.h * 1.01 && sp >= cut.lo - spec.h &&
                    sp <= cut.hi + spec.h;
        if (!near)
          for (const Vec2& bp : cut.branch_points)
            if ((p - bp).norm() <= 1.6 * spec.h) near = true;
        if (near) g.near_cut[static_cast<size_t>(spec.id(i, j))] = 1;
      }
  }
  return g;
}

}  // namespace bma
