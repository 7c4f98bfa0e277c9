#pragma once

#include <optional>
#include <vector>

#include "bma/common.hpp"

namespace bma {

enum class DomainKind { Disk, Ellipse };

/// Bounded strictly convex domain: disk or ellipse (possibly rotated).
/// Immutable after construction; all queries are const.
struct ConvexDomain {
  DomainKind kind = DomainKind::Disk;
  Vec2 center;
  double ax = 1.0, ay = 1.0;  // semi-axes, strictly positive
  double rotation = 0.0;

  static ConvexDomain disk(Vec2 c, double r);
  static ConvexDomain ellipse(Vec2 c, double ax, double ay, double rot = 0.0);

  double diameter() const { return 2.0 * std::max(ax, ay); }
  double boundary_tol() const { return 1e-12 * diameter(); }

  /// Map to/from the axis-aligned frame centered at the origin.
  Vec2 to_canonical(Vec2 p) const;
  Vec2 from_canonical(Vec2 q) const;

  /// (X/ax)^2 + (Y/ay)^2 - 1 in the canonical frame.
  double level(Vec2 p) const;

  bool contains(Vec2 p) const { return level(p) < 0.0; }

  Vec2 boundary_point(double t) const;

  /// Closest boundary point (Newton on the ellipse parameter).
  Vec2 project_to_boundary(Vec2 p) const;

  /// Unit inner normal at a point within boundary_tol() of the boundary.
  /// Throws Domain error otherwise.
  Vec2 inward_normal(Vec2 x) const;
  Vec2 outward_normal(Vec2 x) const { return -inward_normal(x); }

  double max_curvature_radius() const;
  double min_curvature() const;
};

/// Domain with an optional concentric circular hole (annulus support).
struct Region {
  ConvexDomain outer;
  std::optional<double> hole_radius;  // concentric with outer.center

  bool contains(Vec2 p) const {
    if (!outer.contains(p)) return false;
    if (hole_radius && (p - outer.center).norm() <= *hole_radius) return false;
    return true;
  }
  bool in_hole(Vec2 p) const {
    return hole_radius && (p - outer.center).norm() <= *hole_radius;
  }
};

/// Axis-aligned planar cut. 2-d: a horizontal or vertical segment; crossing
/// it transports between sheets. 3-d variant: a disc in an axis-aligned
/// plane (used by crossing() only; covers are built in 2-d).
struct CutSurface {
  // 2-d segment form
  int axis = 1;        // 1: horizontal cut {(t, level)}, sign crosses in y
                       // 0: vertical cut {(level, t)}, sign crosses in x
  double level = 0.0;  // fixed coordinate
  double lo = 0.0, hi = 0.0;  // span along the free coordinate
  int positive = +1;   // orientation of the positive normal along `axis`

  // branch endpoints (those strictly inside the domain)
  std::vector<Vec2> branch_points;

  double tol = 1e-12;

  Vec2 endpoint_a() const;
  Vec2 endpoint_b() const;
  Vec2 positive_normal() const;

  /// Build from segment endpoints + normal; validates axis alignment and
  /// computes branch_points from the region interior.
  static CutSurface from_segment(Vec2 p, Vec2 q, Vec2 normal,
                                 const Region& region);

  /// Snap level and span endpoints to dual (half-step) grid lines of a grid
  /// with origin `org` and spacing `h`; recomputes branch points.
  CutSurface snapped(Vec2 org, double h, const Region& region) const;

  /// Signed crossing of segment a->b: +1 positively oriented crossing,
  /// -1 opposite, 0 none. Throws BranchCollision if the segment passes
  /// within tol of a branch point.
  int crossing(Vec2 a, Vec2 b) const;
};

/// 3-d cut: disc of radius `radius3` around `center3` in the plane
/// {x[plane_axis] = level3}; crossing for 3-d segments, branch set is the
/// bounding circle.
struct CutSurface3 {
  int plane_axis = 2;
  double level3 = 0.0;
  double cx = 0.0, cy = 0.0;  // disc center in the in-plane coordinates
  double radius3 = 1.0;
  int positive = +1;
  double tol = 1e-12;

  int crossing(const double a[3], const double b[3]) const;
};

/// Lattice over a bounding box; nodes at origin + (i,j)h.
struct GridSpec {
  Vec2 origin;
  double h = 1.0;
  int nx = 0, ny = 0;

  static GridSpec cover_region(const Region& r, int n_per_axis,
                               double margin_cells = 2.5);

  int count() const { return nx * ny; }
  int id(int i, int j) const { return j * nx + i; }
  int i_of(int id) const { return id % nx; }
  int j_of(int id) const { return id / nx; }
  Vec2 pos(int i, int j) const {
    return {origin.x + i * h, origin.y + j * h};
  }
  Vec2 pos(int id) const { return pos(i_of(id), j_of(id)); }
  bool in_lattice(int i, int j) const {
    return i >= 0 && i < nx && j >= 0 && j < ny;
  }
};

enum class NodeClass : unsigned char { Outside, Interior, Boundary };

/// GridSpec plus node classification against a region: Interior nodes are
/// strictly inside; Boundary nodes are the first outside layer (axis-adjacent
/// to an interior node) and carry a projection to the region boundary.
struct BaseGrid {
  GridSpec spec;
  Region region;
  std::vector<NodeClass> cls;
  std::vector<Vec2> boundary_proj;  // valid where cls == Boundary
  std::vector<unsigned char> near_cut;

  static BaseGrid build(const Region& region, const GridSpec& spec,
                        const std::vector<CutSurface>& cuts);

  NodeClass klass(int id) const { return cls[static_cast<size_t>(id)]; }
  bool interior(int id) const { return klass(id) == NodeClass::Interior; }
};

}  // namespace bma
