#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bma/operators.hpp"

using namespace bma;

namespace {

Region unit_region() {
  return Region{ConvexDomain::disk({0, 0}, 1.0), std::nullopt};
}

// single-sheet cover of the plain disk (no cuts)
CoverGrid trivial_cover(int n) {
  Region reg = unit_region();
  GridSpec g = GridSpec::cover_region(reg, n);
  return CoverGrid::build(reg, g, {}, SheetModel::window(0, 0));
}

double theta_about(Vec2 p, Vec2 bp, double cut_level) {
  // cut-adapted polar angle: branch jump exactly on the horizontal cut ray
  double raw = std::atan2(p.y - bp.y, p.x - bp.x);
  if (raw < 0) raw += 2 * kPi;
  if (p.x > bp.x && p.y >= bp.y && p.y < cut_level) raw += 2 * kPi;
  return raw;
}

}  // namespace

TEST_CASE("fd_hessian_det on closed forms") {
  auto half_sq = [](const Eigen::VectorXd& x) {
    return 0.5 * x.squaredNorm();
  };
  Eigen::VectorXd x(2);
  x << 0.3, -0.7;
  CHECK(fd_hessian_det(half_sq, x, 0.01) == doctest::Approx(1.0).epsilon(1e-10));

  auto quart = [](const Eigen::VectorXd& p) {
    return std::pow(p[0], 4) + std::pow(p[1], 4);
  };
  Eigen::VectorXd one(2);
  one << 1.0, 1.0;
  CHECK(fd_hessian_det(quart, one, 1e-3) ==
        doctest::Approx(144.0).epsilon(1e-3 / 144.0));

  auto saddle = [](const Eigen::VectorXd& p) {
    return p[0] * p[0] - p[1] * p[1];
  };
  CHECK(fd_hessian_det(saddle, x, 0.01) == doctest::Approx(-4.0).epsilon(1e-10));
}

TEST_CASE("fd_hessian_det affine invariance for det(T)=1") {
  auto F = [](const Eigen::VectorXd& p) {
    return std::pow(p[0], 4) + 0.5 * p[0] * p[0] * p[1] * p[1] +
           std::pow(p[1], 4) + 0.2 * std::exp(0.3 * p[0]);
  };
  Eigen::Matrix2d T;
  T << 1.0, 0.7, 0.0, 1.0;  // shear, det 1
  auto FT = [&](const Eigen::VectorXd& p) {
    return F(Eigen::VectorXd(T * p));
  };
  Eigen::VectorXd x(2);
  x << 0.4, -0.3;
  double lhs = fd_hessian_det(FT, x, 1e-3);
  double rhs = fd_hessian_det(F, Eigen::VectorXd(T * x), 1e-3);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
}

TEST_CASE("ma_monotone: quadratic exactness and affine degeneracy") {
  CoverGrid cg = trivial_cover(49);
  StencilTables t = build_tables(cg, StencilSet::standard());
  REQUIRE(t.nslots() > 0);

  MultiField u = MultiField::zeros(cg);
  fill(u, [](Vec2 p, long) { return 0.5 * (p.x * p.x + p.y * p.y); });
  for (int slot = 0; slot < t.nslots(); slot += 37)
    CHECK(ma_monotone(u, t, slot) == doctest::Approx(1.0).epsilon(1e-8));

  MultiField aff = MultiField::zeros(cg);
  fill(aff, [](Vec2 p, long) { return 3.0 * p.x - 2.0 * p.y + 0.25; });
  for (int slot = 0; slot < t.nslots(); slot += 37)
    CHECK(ma_monotone(aff, t, slot) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ma_monotone consistency on anisotropic quadratics") {
  CoverGrid cg = trivial_cover(49);
  StencilSet st = StencilSet::standard();
  StencilTables t = build_tables(cg, st);
  Eigen::Matrix2d A;
  A << 2.0, 0.6, 0.6, 1.1;
  MultiField u = MultiField::zeros(cg);
  fill(u, [&](Vec2 p, long) {
    Eigen::Vector2d v(p.x, p.y);
    return 0.5 * v.dot(A * v);
  });
  // expected: min over pairs of the normalized Rayleigh products
  double expected = std::numeric_limits<double>::infinity();
  for (const auto& pr : st.pairs) {
    Eigen::Vector2d v1(pr.ax, pr.ay), v2(pr.bx, pr.by);
    double q1 = v1.dot(A * v1) / v1.squaredNorm();
    double q2 = v2.dot(A * v2) / v2.squaredNorm();
    expected = std::min(expected, q1 * q2);
  }
  double detA = A.determinant();
  CHECK(expected >= detA - 1e-12);
  int probes = 0;
  const GridSpec& g = cg.base.spec;
  for (int slot = 0; slot < t.nslots(); slot += 53) {
    // full stencil resolvable only away from the boundary layer
    Vec2 p = g.pos(t.node_of_slot[slot] % cg.nbase);
    if (p.norm() > 1.0 - (st.radius + 1.5) * g.h) continue;
    double val = ma_monotone(u, t, slot);
    CHECK(val == doctest::Approx(expected).epsilon(1e-9));
    ++probes;
  }
  CHECK(probes > 0);
}

TEST_CASE("ma_monotone scaling law ma(c u) = c^n ma(u)") {
  CoverGrid cg = trivial_cover(33);
  StencilTables t = build_tables(cg, StencilSet::standard());
  MultiField u = MultiField::zeros(cg);
  fill(u, [](Vec2 p, long) {
    return 0.7 * p.x * p.x + 0.4 * p.x * p.y + 0.9 * p.y * p.y +
           0.1 * std::exp(p.x);
  });
  MultiField cu = u;
  const double c = 2.75;
  for (double& v : cu.v) v *= c;
  for (int slot = 0; slot < t.nslots(); slot += 29)
    CHECK(ma_monotone(cu, t, slot) ==
          doctest::Approx(c * c * ma_monotone(u, t, slot)).epsilon(1e-13));
}

TEST_CASE("ma_monotone is nondecreasing in off-node values") {
  // raising any neighbor raises second differences; the scheme form
  // f - ma is the monotone-nonincreasing one
  CoverGrid cg = trivial_cover(33);
  StencilTables t = build_tables(cg, StencilSet::standard());
  MultiField u = MultiField::zeros(cg);
  fill(u, [](Vec2 p, long) { return 0.5 * p.x * p.x + 0.8 * p.y * p.y; });
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(0, t.nslots() - 1);
  for (int k = 0; k < 50; ++k) {
    int slot = pick(rng);
    double before = ma_monotone(u, t, slot);
    // bump a random stored arm end
    int d = std::uniform_int_distribution<int>(0, t.ndir() - 1)(rng);
    const auto& a = t.arm(slot, d, k % 2);
    if (a.kind != StencilTables::Arm::Kind::Stored) continue;
    double* val = &u.v[static_cast<size_t>(a.idx)];
    double save = *val;
    *val += 0.37;
    double after = ma_monotone(u, t, slot);
    *val = save;
    CHECK(after >= before - 1e-15);
  }
}

TEST_CASE("laplace_discrete on closed forms") {
  CoverGrid cg = trivial_cover(49);
  StencilTables t = build_tables(cg, StencilSet::standard());
  MultiField u = MultiField::zeros(cg);
  fill(u, [](Vec2 p, long) { return p.x * p.x; });
  for (int slot = 0; slot < t.nslots(); slot += 31)
    CHECK(laplace_discrete(u, t, slot) == doctest::Approx(2.0).epsilon(1e-10));

  MultiField re = MultiField::zeros(cg);
  fill(re, [](Vec2 p, long) { return p.x; });
  for (int slot = 0; slot < t.nslots(); slot += 31)
    CHECK(laplace_discrete(re, t, slot) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("laplace of the two-sheet square root is O(h^2)") {
  // f1 = Re(sqrt(z)) about the branch point, on the 2-sheet slit disk
  Region reg = unit_region();
  double err[2];
  int ns[2] = {33, 65};
  for (int pass = 0; pass < 2; ++pass) {
    GridSpec g = GridSpec::cover_region(reg, ns[pass]);
    CutSurface cut = CutSurface::from_segment({0, 0}, {1.2, 0}, {0, 1}, reg);
    CoverGrid cg = CoverGrid::build(reg, g, {cut}, SheetModel::cyclic(2));
    Vec2 bp = cg.cuts[0].branch_points.at(0);
    double lvl = cg.cuts[0].level;
    StencilTables t = build_tables(cg, StencilSet::standard());
    MultiField u = MultiField::zeros(cg);
    fill(u, [&](Vec2 p, long sheet) {
      double rr = (p - bp).norm();
      double th = theta_about(p, bp, lvl) + 2 * kPi * sheet;
      return std::sqrt(rr) * std::cos(th / 2.0);
    });
    double worst = 0.0;
    for (int slot = 0; slot < t.nslots(); ++slot) {
      int node = t.node_of_slot[slot];
      Vec2 p = g.pos(node % cg.nbase);
      if ((p - bp).norm() < 0.4) continue;  // stay away from the singularity
      worst = std::max(worst, std::abs(laplace_discrete(u, t, slot)));
    }
    err[pass] = worst;
  }
  CHECK(err[1] < 0.35 * err[0]);  // near second order
}

TEST_CASE("convexity_check direction") {
  CoverGrid cg = trivial_cover(33);
  StencilTables t = build_tables(cg, StencilSet::standard());
  MultiField u = MultiField::zeros(cg);
  fill(u, [](Vec2 p, long) { return 0.5 * p.norm2(); });
  CHECK(convexity_check(u, t, 1e-8).passed);
  MultiField w = MultiField::zeros(cg);
  fill(w, [](Vec2 p, long) { return -0.5 * p.norm2(); });
  auto rep = convexity_check(w, t, 1e-8);
  CHECK_FALSE(rep.passed);
  CHECK(rep.min_second_difference < -0.5);
  CHECK(rep.worst_node >= 0);
}

TEST_CASE("subsolution_residual on exact and failing fields") {
  CoverGrid cg = trivial_cover(33);
  StencilTables t = build_tables(cg, StencilSet::standard());
  const double b = 3.0;
  MultiField u = MultiField::zeros(cg);
  fill(u, [&](Vec2 p, long) { return 0.5 * std::sqrt(b) * p.norm2(); });
  MultiField f = MultiField::constant(cg, b);
  CHECK(subsolution_residual(u, f, t) >= -1e-8);

  MultiField aff = MultiField::zeros(cg);
  fill(aff, [](Vec2 p, long) { return p.x + 0.2; });
  MultiField one = MultiField::constant(cg, 1.0);
  CHECK(subsolution_residual(aff, one, t) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("ma_monotone matches the FD oracle on the exponential spiral") {
  // u = r^2 e^{lam theta} lifted to a 3-sheet window of the annulus cover
  Region reg{ConvexDomain::disk({0, 0}, 1.0), 0.1};
  GridSpec g = GridSpec::cover_region(reg, 97);
  CutSurface cut = CutSurface::from_segment({0.05, 0}, {1.05, 0}, {0, 1}, reg);
  const double lam = 0.2;
  const double c = std::exp(2 * kPi * lam);
  CoverGrid cg = CoverGrid::build(reg, g, {cut}, SheetModel::window(0, 2));
  double lvl = cg.cuts[0].level;
  auto uval = [&](Vec2 p, long sheet) {
    double th = theta_about(p, {0, 0}, lvl) + 2 * kPi * sheet;
    return p.norm2() * std::exp(lam * th);
  };
  StencilTables t =
      build_tables(cg, StencilSet::standard(), DeckTwist::scale(c));
  MultiField u = MultiField::zeros(cg);
  u.twist = DeckTwist::scale(c);
  fill(u, uval);

  // oracle: centered FD determinant of the closed form on the same sheet
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> pick(0, t.nslots() - 1);
  int checked = 0;
  for (int k = 0; k < 400 && checked < 60; ++k) {
    int slot = pick(rng);
    int node = t.node_of_slot[slot];
    int sheet = node / cg.nbase;
    Vec2 p = g.pos(node % cg.nbase);
    if (p.norm() < 0.3) continue;  // keep the FD stencil off the hole
    double dist_cut = std::abs(p.y - lvl);
    if (dist_cut < 4 * g.h) continue;  // oracle formula is per-sheet smooth
    auto F = [&](const Eigen::VectorXd& q) {
      return uval({q[0], q[1]}, sheet);
    };
    Eigen::VectorXd x(2);
    x << p.x, p.y;
    double oracle = fd_hessian_det(F, x, 1e-4);
    double val = ma_monotone(u, t, slot);
    // wide-stencil consistency: O(h^2 + dtheta) -- generous envelope
    CHECK(val == doctest::Approx(oracle).epsilon(0.02));
    ++checked;
  }
  CHECK(checked >= 50);
}
