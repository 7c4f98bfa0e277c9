#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bma/geometry.hpp"

using namespace bma;

TEST_CASE("contains: interior is strict") {
  ConvexDomain disk = ConvexDomain::disk({0, 0}, 1.0);
  CHECK(disk.contains({0, 0}));
  CHECK_FALSE(disk.contains({1, 0}));
  ConvexDomain ell = ConvexDomain::ellipse({0, 0}, 2.0, 1.0);
  CHECK(ell.contains({1.9, 0}));
  CHECK_FALSE(ell.contains({0, 1.01}));
}

TEST_CASE("inward_normal at axis points") {
  ConvexDomain disk = ConvexDomain::disk({0, 0}, 1.0);
  Vec2 n1 = disk.inward_normal({1, 0});
  CHECK(n1.x == doctest::Approx(-1.0));
  CHECK(n1.y == doctest::Approx(0.0));
  Vec2 n2 = disk.inward_normal({0, -1});
  CHECK(n2.x == doctest::Approx(0.0));
  CHECK(n2.y == doctest::Approx(1.0));
  ConvexDomain ell = ConvexDomain::ellipse({0, 0}, 2.0, 1.0);
  Vec2 n3 = ell.inward_normal({2, 0});
  CHECK(n3.x == doctest::Approx(-1.0));
  CHECK(n3.y == doctest::Approx(0.0));
  CHECK_THROWS_AS(disk.inward_normal({0.5, 0.5}), Error);
}

TEST_CASE("normal step stays inside") {
  for (const ConvexDomain& d :
       {ConvexDomain::disk({0.3, -0.2}, 0.8),
        ConvexDomain::ellipse({0, 0}, 2, 1, 0.3)}) {
    for (int i = 0; i < 32; ++i) {
      Vec2 xb = d.boundary_point(2 * kPi * i / 32.0);
      Vec2 nu = d.inward_normal(xb);
      for (double t : {1e-6, 1e-3, 1e-2})
        CHECK(d.contains(xb + nu * t));
    }
  }
}

TEST_CASE("strict convexity: open chords lie inside") {
  ConvexDomain ell = ConvexDomain::ellipse({0.1, 0.2}, 1.5, 0.7, 0.4);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 100; ++k) {
    Vec2 a = ell.boundary_point(ang(rng));
    Vec2 b = ell.boundary_point(ang(rng));
    if ((a - b).norm() < 1e-6) continue;
    for (double t : {0.1, 0.5, 0.9})
      CHECK(ell.contains(a + (b - a) * t));
  }
}

TEST_CASE("projection returns boundary points") {
  ConvexDomain ell = ConvexDomain::ellipse({0, 0}, 2.0, 1.0, 0.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int k = 0; k < 50; ++k) {
    Vec2 p{u(rng), u(rng)};
    Vec2 q = ell.project_to_boundary(p);
    CHECK(std::abs(ell.level(q)) < 1e-10);
  }
}

static Region unit_region() {
  return Region{ConvexDomain::disk({0, 0}, 1.0), std::nullopt};
}

TEST_CASE("crossing sign convention") {
  Region reg = unit_region();
  CutSurface cut = CutSurface::from_segment({0, 0}, {1, 0}, {0, 1}, reg);
  CHECK(cut.crossing({0.5, -0.1}, {0.5, 0.1}) == +1);
  CHECK(cut.crossing({0.5, 0.1}, {0.5, -0.1}) == -1);
  CHECK(cut.crossing({1.5, -0.1}, {1.5, 0.1}) == 0);
}

TEST_CASE("crossing antisymmetry on random segments") {
  Region reg = unit_region();
  CutSurface cut = CutSurface::from_segment({-0.5, 0}, {0.5, 0}, {0, 1}, reg);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 200; ++k) {
    Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    int c1, c2;
    try {
      c1 = cut.crossing(a, b);
      c2 = cut.crossing(b, a);
    } catch (const Error&) {
      continue;  // branch collision; property does not apply
    }
    CHECK(c1 == -c2);
  }
}

TEST_CASE("branch points and collisions") {
  Region reg = unit_region();
  // both endpoints interior -> two branch points
  CutSurface chord = CutSurface::from_segment({-0.5, 0}, {0.5, 0}, {0, 1}, reg);
  CHECK(chord.branch_points.size() == 2);
  // one endpoint outside the closed disk -> a single branch point
  CutSurface radial = CutSurface::from_segment({0, 0}, {1.2, 0}, {0, 1}, reg);
  CHECK(radial.branch_points.size() == 1);
  CHECK_THROWS_AS(chord.crossing({0.5, -0.1}, {0.5, 0.1}), Error);
  // non-axis-aligned cut rejected
  CHECK_THROWS_AS(CutSurface::from_segment({0, 0}, {1, 0.5}, {0, 1}, reg),
                  Error);
}

TEST_CASE("snapping puts cuts on dual lines") {
  Region reg = unit_region();
  CutSurface cut = CutSurface::from_segment({0, 0}, {1.2, 0}, {0, 1}, reg);
  Vec2 org{-1.1, -1.1};
  double h = 0.1;
  CutSurface s = cut.snapped(org, h, reg);
  double frac = (s.level - org.y) / h;
  CHECK(std::abs(frac - std::round(frac - 0.5) - 0.5) < 1e-12);
  CHECK(std::abs(s.level) <= h / 2 + 1e-12);
  CHECK(s.branch_points.size() == 1);
}

TEST_CASE("3-d plane-disc crossing") {
  CutSurface3 cut;
  cut.plane_axis = 2;
  cut.level3 = 0.0;
  cut.cx = cut.cy = 0.0;
  cut.radius3 = 1.0;
  double a[3] = {0.2, 0.3, -0.5}, b[3] = {0.2, 0.3, 0.5};
  CHECK(cut.crossing(a, b) == +1);
  CHECK(cut.crossing(b, a) == -1);
  double c[3] = {1.5, 0.0, -0.5}, d[3] = {1.5, 0.0, 0.5};
  CHECK(cut.crossing(c, d) == 0);
}

TEST_CASE("grid covers region with margin and boundary projections") {
  Region reg = unit_region();
  GridSpec g = GridSpec::cover_region(reg, 65);
  BaseGrid bg = BaseGrid::build(reg, g, {});
  int n_int = 0, n_bnd = 0;
  for (int id = 0; id < g.count(); ++id) {
    if (bg.cls[id] == NodeClass::Interior) ++n_int;
    if (bg.cls[id] == NodeClass::Boundary) {
      ++n_bnd;
      Vec2 p = g.pos(id);
      Vec2 pr = bg.boundary_proj[id];
      CHECK((p - pr).norm() < g.h);  // projection within one spacing
      CHECK(std::abs(reg.outer.level(pr)) < 1e-9);
    }
  }
  CHECK(n_int > 2000);
  CHECK(n_bnd > 100);
}

TEST_CASE("annulus region classifies the hole") {
  Region reg{ConvexDomain::disk({0, 0}, 1.0), 0.1};
  CHECK_FALSE(reg.contains({0, 0}));
  CHECK_FALSE(reg.contains({0.05, 0}));
  CHECK(reg.contains({0.5, 0}));
  GridSpec g = GridSpec::cover_region(reg, 65);
  BaseGrid bg = BaseGrid::build(reg, g, {});
  int hole_bnd = 0;
  for (int id = 0; id < g.count(); ++id)
    if (bg.cls[id] == NodeClass::Boundary && reg.in_hole(g.pos(id)))
      ++hole_bnd;
  CHECK(hole_bnd >= 4);
}
