#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bma/cover.hpp"

using namespace bma;

namespace {

Region unit_region() {
  return Region{ConvexDomain::disk({0, 0}, 1.0), std::nullopt};
}

CoverGrid disk_cover(int n, int k, Vec2 cut_from, Vec2 cut_to) {
  Region reg = unit_region();
  GridSpec g = GridSpec::cover_region(reg, n);
  CutSurface cut = CutSurface::from_segment(cut_from, cut_to, {0, 1}, reg);
  return CoverGrid::build(reg, g, {cut}, SheetModel::cyclic(k));
}

// Signed crossings accumulated along the rectangle of lattice points with
// corners offset +-w, +-hh (in node steps) from the node nearest `around`.
int loop_sheet_change(const CoverGrid& cg, Vec2 around, int w, int hh,
                      int times = 1) {
  const GridSpec& g = cg.base.spec;
  int ci = static_cast<int>(std::lround((around.x - g.origin.x) / g.h));
  int cj = static_cast<int>(std::lround((around.y - g.origin.y) / g.h));
  std::vector<Vec2> pts;
  for (int i = -w; i <= w; ++i) pts.push_back(g.pos(ci + i, cj - hh));
  for (int j = -hh + 1; j <= hh; ++j) pts.push_back(g.pos(ci + w, cj + j));
  for (int i = w - 1; i >= -w; --i) pts.push_back(g.pos(ci + i, cj + hh));
  for (int j = hh - 1; j >= -hh; --j) pts.push_back(g.pos(ci - w, cj + j));
  int total = 0;
  for (int rep = 0; rep < times; ++rep)
    for (size_t p = 0; p + 1 < pts.size(); ++p)
      total += cg.crossings(pts[p], pts[p + 1]);
  return total;
}

}  // namespace

TEST_CASE("two-sheet cover of the slit disk") {
  CoverGrid cg = disk_cover(65, 2, {0, 0}, {1.2, 0});
  CHECK(cg.stored_sheets() == 2);
  CHECK(cg.stored_total() == 2l * cg.nbase);
  Vec2 bp = cg.cuts[0].branch_points.at(0);
  int ch = loop_sheet_change(cg, bp, 4, 4);
  CHECK(std::abs(ch) == 1);  // one loop moves one sheet
}

TEST_CASE("mod-3 monodromy closes after three loops") {
  CoverGrid cg = disk_cover(65, 3, {0, 0}, {1.2, 0});
  Vec2 bp = cg.cuts[0].branch_points.at(0);
  int ch = loop_sheet_change(cg, bp, 5, 5, 3);
  CHECK(std::abs(ch) == 3);
  CHECK(cg.sheets.store_index(ch) == 0);  // back to the start sheet mod 3
}

TEST_CASE("chord cut: loops around one or both branch points") {
  CoverGrid cg = disk_cover(129, 2, {-0.5, 0}, {0.5, 0});
  const auto& bps = cg.cuts[0].branch_points;
  REQUIRE(bps.size() == 2);
  int one = loop_sheet_change(cg, bps[0], 6, 6);
  CHECK(std::abs(one) == 1);
  // a loop enclosing both endpoints crosses the cut once up, once down
  Vec2 mid = (bps[0] + bps[1]) * 0.5;
  int both = loop_sheet_change(cg, mid, 45, 10);
  CHECK(both == 0);
}

TEST_CASE("monodromy equals winding number on random loops") {
  CoverGrid cg = disk_cover(129, 3, {-0.5, 0}, {0.5, 0});
  const auto bps = cg.all_branch_points();
  const GridSpec& g = cg.base.spec;
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> ci(30, 98), sz(2, 25);
  int tested = 0;
  for (int k = 0; k < 200 && tested < 120; ++k) {
    int i0 = ci(rng), j0 = ci(rng), w = sz(rng), hh = sz(rng);
    if (i0 - w < 1 || i0 + w >= g.nx - 1 || j0 - hh < 1 || j0 + hh >= g.ny - 1)
      continue;
    // polygon corners
    Vec2 a = g.pos(i0 - w, j0 - hh), b = g.pos(i0 + w, j0 - hh);
    Vec2 c = g.pos(i0 + w, j0 + hh), d = g.pos(i0 - w, j0 + hh);
    int sum;
    try {
      sum = cg.crossings(a, b) + cg.crossings(b, c) + cg.crossings(c, d) +
            cg.crossings(d, a);
    } catch (const Error&) {
      continue;
    }
    // brute-force winding oracle: a ccw loop around the cut's left
    // endpoint gains a sheet, around the right endpoint loses one
    int wind = 0;
    const CutSurface& cut = cg.cuts[0];
    for (const Vec2& bp : bps) {
      bool inside = bp.x > a.x && bp.x < b.x && bp.y > a.y && bp.y < c.y;
      if (!inside) continue;
      wind += (std::abs(bp.x - cut.lo) < std::abs(bp.x - cut.hi)) ? +1 : -1;
    }
    CHECK(sum == wind);
    ++tested;
  }
  CHECK(tested >= 100);
}

TEST_CASE("neighbor: cut crossings and boundary hits") {
  CoverGrid cg = disk_cover(65, 2, {0, 0}, {1.2, 0});
  const GridSpec& g = cg.base.spec;
  const CutSurface& cut = cg.cuts[0];
  // a node just below the cut, within its span
  int j_below = -1, i_at = -1;
  for (int j = 0; j + 1 < g.ny && j_below < 0; ++j)
    if (g.pos(0, j).y < cut.level && g.pos(0, j + 1).y > cut.level)
      j_below = j;
  for (int i = 0; i < g.nx && i_at < 0; ++i) {
    double x = g.pos(i, j_below).x;
    if (x > cut.lo + g.h && x < cut.hi - g.h &&
        cg.base.interior(g.id(i, j_below)))
      i_at = i;
  }
  REQUIRE(i_at >= 0);
  int base = g.id(i_at, j_below);

  auto up = cg.neighbor(base, 0, 0, 1, 1);
  CHECK(up.kind == CoverGrid::Ray::Kind::Interior);
  CHECK(up.sheet == 1);
  CHECK(up.base == g.id(i_at, j_below + 1));

  // far from the cut: no sheet change
  auto far = cg.neighbor(g.id(i_at, j_below - 5), 0, 1, 0, 1);
  CHECK(far.sheet == 0);

  // two steps crossing once: sheet +1, base moved 2 cells
  auto two = cg.neighbor(base, 0, 0, 1, 2);
  CHECK(two.sheet == 1);
  CHECK(two.base == g.id(i_at, j_below + 2));

  // marching toward the boundary ends on a boundary node
  CoverGrid::Ray r{};
  int bb = g.id(i_at, j_below - 3);
  for (int s = 1; s < 100; ++s) {
    r = cg.neighbor(bb, 0, 1, 0, s);
    if (r.kind != CoverGrid::Ray::Kind::Interior) break;
  }
  CHECK(r.kind == CoverGrid::Ray::Kind::Boundary);
  CHECK(cg.base.klass(r.base) == NodeClass::Boundary);
}

TEST_CASE("transport rules") {
  DeckTwist sc = DeckTwist::scale(std::exp(0.5));
  auto [v1, p1] = sc.transport(2.0, {0.3, 0.4}, 1);
  CHECK(v1 == doctest::Approx(3.29744254140026).epsilon(1e-12));
  CHECK(p1.x == 0.3);

  DeckTwist per = DeckTwist::periodic();
  CHECK(per.transport(7.0, {0, 0}, 5).first == 7.0);

  DeckTwist aff = DeckTwist::affine(Mat2::shear_x(1.0));
  auto [v3, p3] = aff.transport(4.5, {1, 1}, 1);
  CHECK(v3 == 4.5);
  CHECK(p3.x == doctest::Approx(2.0));
  CHECK(p3.y == doctest::Approx(1.0));

  // scale composition: transport(d1) o transport(d2) = transport(d1+d2)
  for (int d1 : {-2, 1, 3})
    for (int d2 : {-1, 2}) {
      double a = sc.transport(sc.transport(1.7, {0, 0}, d2).first, {0, 0}, d1)
                     .first;
      double b = sc.transport(1.7, {0, 0}, d1 + d2).first;
      CHECK(a == doctest::Approx(b).epsilon(1e-14));
    }

  // periodic transport by k is the identity on a cyclic cover
  CHECK(per.transport(3.25, {0.1, 0.2}, 4).first == 3.25);

  CHECK_THROWS_AS(DeckTwist::scale(-1.0), Error);
  CHECK_THROWS_AS(DeckTwist::affine(Mat2{2, 0, 0, 1}), Error);
}

TEST_CASE("boundary lifts exist once per sheet") {
  CoverGrid cg = disk_cover(65, 2, {0, 0}, {1.2, 0});
  int nb = 0;
  for (int id = 0; id < cg.nbase; ++id)
    if (cg.base.klass(id) == NodeClass::Boundary) ++nb;
  MultiField f = MultiField::zeros(cg);
  fill(f, [](Vec2, long sheet) { return static_cast<double>(sheet); });
  for (int id = 0; id < cg.nbase; ++id)
    if (cg.base.klass(id) == NodeClass::Boundary) {
      CHECK(f.at(id, 0) == 0.0);
      CHECK(f.at(id, 1) == 1.0);
      CHECK(f.at(id, 3) == 1.0);  // cyclic wrap
    }
  CHECK(nb > 50);
}

TEST_CASE("fundamental window with scale twist is exactly equivariant") {
  Region reg = unit_region();
  GridSpec g = GridSpec::cover_region(reg, 33);
  CutSurface cut = CutSurface::from_segment({0, 0}, {1.2, 0}, {0, 1}, reg);
  CoverGrid cg = CoverGrid::build(reg, g, {cut}, SheetModel::window(0, 0));
  MultiField f = MultiField::zeros(cg);
  f.twist = DeckTwist::scale(std::exp(0.5));
  fill(f, [](Vec2 p, long) { return 1.0 + p.x + p.y * p.y; });
  double c = std::exp(0.5);
  for (int id : cg.interior_base) {
    double base = f.at(id, 0);
    CHECK(f.at(id, 2) == base * std::pow(c, 2));   // representation-exact
    CHECK(f.at(id, -1) == base * std::pow(c, -1));
  }
}
