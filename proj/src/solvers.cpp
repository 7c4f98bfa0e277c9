#include "bma/solvers.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

namespace bma {

namespace {

double ma_with_center(const MultiField& u, const StencilTables& t, int slot,
                      double center) {
  const int npairs = static_cast<int>(t.stencil.pairs.size());
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int p = 0; p < npairs; ++p) {
    double d1, d2;
    if (!t.second_difference(u, slot, 2 * p, center, d1)) continue;
    if (!t.second_difference(u, slot, 2 * p + 1, center, d2)) continue;
    any = true;
    best = std::min(best, std::max(d1, 0.0) * std::max(d2, 0.0));
  }
  if (!any)
    throw Error(ErrorKind::StencilDegenerate, "no resolvable direction pair");
  return best;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

std::vector<unsigned char> default_updatable(const StencilTables& t) {
  std::vector<unsigned char> up(static_cast<size_t>(t.nslots()), 0);
  for (int s = 0; s < t.nslots(); ++s) {
    bool ok = true;
    for (int d = 0; d < 2 && ok; ++d)
      for (int side = 0; side < 2; ++side)
        if (t.arm(s, d, side).kind == StencilTables::Arm::Kind::Dropped)
          ok = false;
    up[static_cast<size_t>(s)] = ok;
  }
  return up;
}

// BFS over axis steps restricted to |pos - center| <= radius.
BallRegion make_ball(const CoverGrid& cg, const StencilTables& t,
                     const std::vector<unsigned char>& updatable,
                     int center_base, int center_sidx, double radius) {
  BallRegion ball;
  ball.center_base = center_base;
  ball.center_sidx = center_sidx;
  ball.radius = radius;

  const GridSpec& g = cg.base.spec;
  Vec2 c = g.pos(center_base);
  const SheetModel& sm = cg.sheets;
  long center_sheet = sm.kind == SheetModel::Kind::CyclicK
                          ? center_sidx
                          : sm.lo + center_sidx;

  std::vector<std::pair<int, long>> stack{{center_base, center_sheet}};
  std::vector<int> seen;  // stored nodes touched, for cleanup-free marking
  static thread_local std::vector<unsigned char> visited;
  visited.assign(static_cast<size_t>(cg.stored_total()), 0);

  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  while (!stack.empty()) {
    auto [base, sheet] = stack.back();
    stack.pop_back();
    if (!sm.in_window(sheet)) continue;
    int node = cg.stored_node(base, sm.store_index(sheet));
    if (visited[static_cast<size_t>(node)]) continue;
    visited[static_cast<size_t>(node)] = 1;
    int slot = t.slot_of_node[static_cast<size_t>(node)];
    if (slot >= 0 && updatable[static_cast<size_t>(slot)])
      ball.slots.push_back(slot);
    for (int k = 0; k < 4; ++k) {
      CoverGrid::Ray r = cg.neighbor(base, sheet, di[k], dj[k], 1);
      if (r.kind != CoverGrid::Ray::Kind::Interior) continue;
      if ((g.pos(r.base) - c).norm() > radius) continue;
      stack.push_back({r.base, r.sheet});
    }
  }
  std::sort(ball.slots.begin(), ball.slots.end());
  return ball;
}

BallSchedule BallSchedule::build(const CoverGrid& cg, const StencilTables& t,
                                 const std::vector<unsigned char>& updatable,
                                 double radius_h, double stride_h) {
  BallSchedule sched;
  const GridSpec& g = cg.base.spec;
  const double h = g.h;
  auto bps = cg.all_branch_points();
  auto bp_dist = [&](Vec2 p) {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& bp : bps) d = std::min(d, (p - bp).norm());
    return d;
  };

  const int ns = cg.stored_sheets();
  const int stride = std::max(1, static_cast<int>(std::lround(stride_h)));
  for (int s = 0; s < ns; ++s) {
    for (int j = 0; j < g.ny; j += stride)
      for (int i = 0; i < g.nx; i += stride) {
        int base = g.id(i, j);
        if (!cg.base.interior(base)) continue;
        Vec2 p = g.pos(base);
        double r = radius_h * h;
        r = std::min(r, bp_dist(p) - 0.75 * h);
        if (r < 1.5 * h) continue;
        BallRegion b = make_ball(cg, t, updatable, base, s, r);
        if (!b.slots.empty()) sched.balls.push_back(std::move(b));
      }
    // offset rings around branch points
    for (const Vec2& bp : bps)
      for (int q = 0; q < 8; ++q) {
        double ang = 2.0 * kPi * q / 8.0;
        Vec2 cpos = bp + Vec2{std::cos(ang), std::sin(ang)} * (3.2 * h);
        int ci = static_cast<int>(std::lround((cpos.x - g.origin.x) / h));
        int cj = static_cast<int>(std::lround((cpos.y - g.origin.y) / h));
        if (!g.in_lattice(ci, cj)) continue;
        int base = g.id(ci, cj);
        if (!cg.base.interior(base)) continue;
        double r = std::min(2.2 * h, 0.9 * bp_dist(g.pos(base)));
        if (r <= 0) continue;
        BallRegion b = make_ball(cg, t, updatable, base, s, r);
        if (!b.slots.empty()) sched.balls.push_back(std::move(b));
      }
  }

  // per-node fallback balls for anything still uncovered
  std::vector<unsigned char> covered(updatable.size(), 0);
  for (const BallRegion& b : sched.balls)
    for (int s : b.slots) covered[static_cast<size_t>(s)] = 1;
  for (size_t slot = 0; slot < updatable.size(); ++slot) {
    if (!updatable[slot] || covered[slot]) continue;
    int node = t.node_of_slot[slot];
    int base = node % cg.nbase;
    int sidx = node / cg.nbase;
    double r = std::min(4.0 * h, 0.9 * bp_dist(g.pos(base)));
    BallRegion b = make_ball(cg, t, updatable, base, sidx, std::max(r, 0.0));
    if (b.slots.empty()) b.slots.push_back(static_cast<int>(slot));
    for (int s : b.slots) covered[static_cast<size_t>(s)] = 1;
    sched.balls.push_back(std::move(b));
  }
  return sched;
}

double pointwise_ma_update(MultiField& u, const StencilTables& t, int slot,
                           double f) {
  const int node = t.node_of_slot[static_cast<size_t>(slot)];
  const double cur = u.v[static_cast<size_t>(node)];
  auto g = [&](double c) { return ma_with_center(u, t, slot, c) - f; };

  double g0 = g(cur);
  double lo, hi;
  double d = 1e-8 + 0.01 * (1.0 + std::abs(cur));
  if (g0 >= 0) {
    lo = cur;
    hi = cur + d;
    int guard = 0;
    while (g(hi) > 0 && guard++ < 100) {
      lo = hi;
      d *= 2;
      hi += d;
    }
    if (g(hi) > 0) return cur;  // flat residual; keep
  } else {
    hi = cur;
    lo = cur - d;
    int guard = 0;
    while (g(lo) < 0 && guard++ < 100) {
      hi = lo;
      d *= 2;
      lo -= d;
    }
    if (g(lo) < 0)
      throw Error(ErrorKind::Diverged, "pointwise update: no bracket");
  }
  for (int it = 0; it < 90 && hi - lo > 1e-16 * (1 + std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) > 0)
      lo = mid;
    else
      hi = mid;  // seek the smallest root on a flat zero plateau
  }
  return 0.5 * (lo + hi);
}

double gs_sweep(MultiField& u, const StencilTables& t,
                const std::vector<int>& slots, const MultiField& f) {
  double max_upd = 0.0;
  for (int slot : slots) {
    int node = t.node_of_slot[static_cast<size_t>(slot)];
    double nv = pointwise_ma_update(u, t, slot, f.v[static_cast<size_t>(node)]);
    max_upd = std::max(max_upd, std::abs(nv - u.v[static_cast<size_t>(node)]));
    u.v[static_cast<size_t>(node)] = nv;
  }
  return max_upd;
}

namespace {

double residual_inf(const MultiField& u, const StencilTables& t,
                    const std::vector<int>& slots, const MultiField& f) {
  double r = 0.0;
  for (int slot : slots) {
    int node = t.node_of_slot[static_cast<size_t>(slot)];
    r = std::max(r, std::abs(ma_monotone(u, t, slot) -
                             f.v[static_cast<size_t>(node)]));
  }
  return r;
}

}  // namespace

SolveReport newton_ma(MultiField& u, const StencilTables& t,
                      const std::vector<int>& slots, const MultiField& f,
                      const NewtonOpts& opts) {
  SolveReport rep;
  const double t0 = now_seconds();
  const int n = static_cast<int>(slots.size());
  if (n == 0) {
    rep.converged = true;
    return rep;
  }
  std::vector<int> eq_of_slot(static_cast<size_t>(t.nslots()), -1);
  for (int k = 0; k < n; ++k) eq_of_slot[static_cast<size_t>(slots[k])] = k;

  for (int pass = 0; pass < opts.gs_warmup; ++pass) gs_sweep(u, t, slots, f);

  const int npairs = static_cast<int>(t.stencil.pairs.size());
  Eigen::VectorXd R(n), du(n);
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::SparseMatrix<double> J(n, n);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

  double resnorm = residual_inf(u, t, slots, f);
  std::vector<double> saved(static_cast<size_t>(n));

  for (int it = 0; it < opts.max_iter; ++it) {
    rep.iterations = it;
    if (resnorm <= opts.tol) {
      rep.converged = true;
      break;
    }
    trips.clear();
    for (int k = 0; k < n; ++k) {
      int slot = slots[k];
      int node = t.node_of_slot[static_cast<size_t>(slot)];
      double center = u.v[static_cast<size_t>(node)];
      double fval = f.v[static_cast<size_t>(node)];
      // active pair = argmin of the positive-part products
      int best_p = -1;
      double best = std::numeric_limits<double>::infinity();
      double bd1 = 0, bd2 = 0;
      for (int p = 0; p < npairs; ++p) {
        double d1, d2;
        if (!t.second_difference(u, slot, 2 * p, center, d1)) continue;
        if (!t.second_difference(u, slot, 2 * p + 1, center, d2)) continue;
        double prod = std::max(d1, 0.0) * std::max(d2, 0.0);
        if (prod < best) {
          best = prod;
          best_p = p;
          bd1 = d1;
          bd2 = d2;
        }
      }
      if (best_p < 0)
        throw Error(ErrorKind::StencilDegenerate, "newton: degenerate node");
      R[k] = best - fval;

      // weights for d(prod)/d(d_i); floor keeps clamped rows solvable
      double floorv = 1e-8 + 0.05 * std::sqrt(std::max(fval, 0.0));
      double w1 = bd1 > 0 ? std::max(bd2, 0.0) : 0.0;
      double w2 = bd2 > 0 ? std::max(bd1, 0.0) : 0.0;
      w1 = std::max(w1, floorv);
      w2 = std::max(w2, floorv);

      double diag = 0.0;
      for (int half = 0; half < 2; ++half) {
        int d = 2 * best_p + half;
        double w = half == 0 ? w1 : w2;
        double il2 = 1.0 / t.len2[static_cast<size_t>(d)];
        diag += w * (-2.0) * il2;
        for (int side = 0; side < 2; ++side) {
          const StencilTables::Arm& a = t.arm(slot, d, side);
          if (a.kind != StencilTables::Arm::Kind::Stored) continue;
          int oslot = t.slot_of_node[static_cast<size_t>(a.idx)];
          int oe = oslot >= 0 ? eq_of_slot[static_cast<size_t>(oslot)] : -1;
          if (oe < 0) continue;  // Dirichlet-acting node
          double mult = 1.0;
          if (a.cross != 0 && t.twist_kind == DeckTwist::Kind::Scale)
            mult = std::pow(t.twist_c, a.cross);
          trips.emplace_back(k, oe, w * il2 * mult);
        }
      }
      trips.emplace_back(k, k, diag);
    }
    J.setFromTriplets(trips.begin(), trips.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      // fall back to relaxation and retry
      gs_sweep(u, t, slots, f);
      resnorm = residual_inf(u, t, slots, f);
      continue;
    }
    du = lu.solve(-R);

    for (int k = 0; k < n; ++k)
      saved[static_cast<size_t>(k)] =
          u.v[static_cast<size_t>(t.node_of_slot[static_cast<size_t>(slots[k])])];
    double alpha = 1.0;
    bool accepted = false;
    for (int halv = 0; halv <= opts.max_halvings; ++halv) {
      for (int k = 0; k < n; ++k)
        u.v[static_cast<size_t>(t.node_of_slot[static_cast<size_t>(slots[k])])] =
            saved[static_cast<size_t>(k)] + alpha * du[k];
      double rn = residual_inf(u, t, slots, f);
      if (rn < resnorm) {
        resnorm = rn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      for (int k = 0; k < n; ++k)
        u.v[static_cast<size_t>(t.node_of_slot[static_cast<size_t>(slots[k])])] =
            saved[static_cast<size_t>(k)];
      gs_sweep(u, t, slots, f);
      resnorm = residual_inf(u, t, slots, f);
    }
  }
  rep.residual = resnorm;
  rep.converged = resnorm <= opts.tol;
  rep.wall_s = now_seconds() - t0;
  if (!rep.converged)
    throw Error(ErrorKind::Diverged, "newton_ma did not converge: residual " +
                                         std::to_string(resnorm));
  return rep;
}

double solve_ma_ball(MultiField& u, const StencilTables& t,
                     const BallRegion& ball, const MultiField& f,
                     double tol_ball) {
  double fmax = 0.0;
  for (int slot : ball.slots) {
    int node = t.node_of_slot[static_cast<size_t>(slot)];
    double fv = f.v[static_cast<size_t>(node)];
    if (fv < 0)
      throw Error(ErrorKind::Domain, "solve_ma_ball: f < 0 in the ball");
    fmax = std::max(fmax, fv);
  }
  std::vector<double> before(ball.slots.size());
  for (size_t i = 0; i < ball.slots.size(); ++i)
    before[i] = u.v[static_cast<size_t>(
        t.node_of_slot[static_cast<size_t>(ball.slots[i])])];

  if (fmax <= 1e-12) {
    // degenerate case: the residual vanishes quadratically near the
    // envelope, so relax on node updates instead of the residual
    double upd = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 20000 && upd > 1e-13; ++pass)
      upd = gs_sweep(u, t, ball.slots, f);
  } else {
    NewtonOpts nopts;
    nopts.tol = tol_ball;
    nopts.max_iter = 40;
    try {
      newton_ma(u, t, ball.slots, f, nopts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Diverged) throw;
      // stubborn ball: relax pointwise until the residual settles
      double upd = std::numeric_limits<double>::infinity();
      for (int pass = 0; pass < 4000 && upd > tol_ball; ++pass)
        upd = gs_sweep(u, t, ball.slots, f);
      if (upd > tol_ball)
        throw Error(ErrorKind::Diverged, "ball solve did not converge");
    }
  }
  double max_change = 0.0;
  for (size_t i = 0; i < ball.slots.size(); ++i) {
    double& v = u.v[static_cast<size_t>(
        t.node_of_slot[static_cast<size_t>(ball.slots[i])])];
    max_change = std::max(max_change, std::abs(v - before[i]));
  }
  return max_change;
}

SolveReport solve_ma_domain(MultiField& u, const StencilTables& t,
                            const std::vector<unsigned char>& updatable,
                            const MultiField& f, const NewtonOpts& opts) {
  std::vector<int> slots;
  for (int s = 0; s < t.nslots(); ++s)
    if (updatable[static_cast<size_t>(s)]) slots.push_back(s);
  return newton_ma(u, t, slots, f, opts);
}

void solve_laplace_cover(MultiField& u, const StencilTables& t,
                         const std::vector<unsigned char>& updatable) {
  std::vector<int> slots;
  for (int s = 0; s < t.nslots(); ++s)
    if (updatable[static_cast<size_t>(s)]) slots.push_back(s);
  const int n = static_cast<int>(slots.size());
  if (n == 0) return;
  std::vector<int> eq_of_slot(static_cast<size_t>(t.nslots()), -1);
  for (int k = 0; k < n; ++k) eq_of_slot[static_cast<size_t>(slots[k])] = k;

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    int slot = slots[k];
    double diag = 0.0;
    for (int d = 0; d < 2; ++d)  // axis pair
      for (int side = 0; side < 2; ++side) {
        const StencilTables::Arm& a = t.arm(slot, d, side);
        if (a.kind == StencilTables::Arm::Kind::Dropped)
          throw Error(ErrorKind::BranchCollision,
                      "laplace: axis stencil unresolvable");
        diag -= 1.0;
        if (a.kind == StencilTables::Arm::Kind::Fixed) {
          rhs[k] -= t.fixed_vals[static_cast<size_t>(a.idx)];
          continue;
        }
        double mult = 1.0, add = 0.0;
        if (a.cross != 0) {
          if (t.twist_kind == DeckTwist::Kind::Scale)
            mult = std::pow(t.twist_c, a.cross);
          else if (t.twist_kind == DeckTwist::Kind::AdditiveShift)
            add = t.twist_delta * a.cross;
        }
        rhs[k] -= add;
        int oslot = t.slot_of_node[static_cast<size_t>(a.idx)];
        int oe = oslot >= 0 ? eq_of_slot[static_cast<size_t>(oslot)] : -1;
        if (oe >= 0)
          trips.emplace_back(k, oe, mult);
        else
          rhs[k] -= mult * u.v[static_cast<size_t>(a.idx)];
      }
    trips.emplace_back(k, k, diag);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::Diverged, "laplace: singular system");
  Eigen::VectorXd x = lu.solve(rhs);
  double rel = (A * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (rel > 1e-10)
    throw Error(ErrorKind::Diverged, "laplace: relative residual " +
                                         std::to_string(rel));
  for (int k = 0; k < n; ++k)
    u.v[static_cast<size_t>(
        t.node_of_slot[static_cast<size_t>(slots[k])])] = x[k];
}

SolveReport perron(MultiField& u, const StencilTables& t,
                   const BallSchedule& schedule,
                   const std::vector<unsigned char>& updatable,
                   const MultiField& f, const PerronOpts& opts) {
  SolveReport rep;
  const double t0 = now_seconds();

  if (opts.check_subsolution) {
    double r = subsolution_residual(u, f, t, nullptr);
    // clamped slots are excluded by the caller through `updatable` masks
    std::vector<unsigned char> skip(static_cast<size_t>(t.nslots()), 0);
    for (int s = 0; s < t.nslots(); ++s)
      skip[static_cast<size_t>(s)] = !updatable[static_cast<size_t>(s)];
    r = subsolution_residual(u, f, t, &skip);
    if (r < -opts.tol_sub)
      throw Error(ErrorKind::Domain,
                  "perron: initial field is not a subsolution (residual " +
                      std::to_string(r) + ")");
  }

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double max_upd = 0.0;
    for (const BallRegion& ball : schedule.balls) {
      std::vector<double> inc(ball.slots.size());
      for (size_t i = 0; i < ball.slots.size(); ++i)
        inc[i] = u.v[static_cast<size_t>(
            t.node_of_slot[static_cast<size_t>(ball.slots[i])])];
      solve_ma_ball(u, t, ball, f, opts.tol_ball);
      // T_B v >= v for subsolutions; clamp inexact ball solves from below
      for (size_t i = 0; i < ball.slots.size(); ++i) {
        double& v = u.v[static_cast<size_t>(
            t.node_of_slot[static_cast<size_t>(ball.slots[i])])];
        v = std::max(v, inc[i]);
        max_upd = std::max(max_upd, v - inc[i]);
      }
    }
    rep.iterations = sweep;
    rep.max_update = max_upd;
    if (opts.on_sweep) {
      double res = ma_residual_norm(u, t, updatable, f);
      opts.on_sweep(sweep, max_upd, res);
    }
    if (max_upd <= opts.tol) {
      rep.converged = true;
      break;
    }
  }
  rep.residual = ma_residual_norm(u, t, updatable, f);
  rep.wall_s = now_seconds() - t0;
  return rep;
}

double perron_fixed_point_gap(const MultiField& u, const StencilTables& t,
                              const BallSchedule& schedule,
                              const MultiField& f, double tol_ball) {
  double gap = 0.0;
  MultiField w = u;
  for (const BallRegion& ball : schedule.balls) {
    for (int slot : ball.slots) {
      int node = t.node_of_slot[static_cast<size_t>(slot)];
      w.v[static_cast<size_t>(node)] = u.v[static_cast<size_t>(node)];
    }
    double change = solve_ma_ball(w, t, ball, f, tol_ball);
    gap = std::max(gap, change);
    for (int slot : ball.slots) {
      int node = t.node_of_slot[static_cast<size_t>(slot)];
      w.v[static_cast<size_t>(node)] = u.v[static_cast<size_t>(node)];
    }
  }
  return gap;
}

double ma_residual_norm(const MultiField& u, const StencilTables& t,
                        const std::vector<unsigned char>& updatable,
                        const MultiField& f) {
  double r = 0.0;
  for (int s = 0; s < t.nslots(); ++s) {
    if (!updatable[static_cast<size_t>(s)]) continue;
    int node = t.node_of_slot[static_cast<size_t>(s)];
    r = std::max(r, std::abs(ma_monotone(u, t, s) -
                             f.v[static_cast<size_t>(node)]));
  }
  return r;
}

ComparisonResult comparison_check(const MultiField& u, const MultiField& v,
                                  const MultiField& f, const StencilTables& t,
                                  double tol) {
  ComparisonResult res;
  const CoverGrid& cg = *t.cg;
  // precondition: ma(u) >= f >= ma(v) within tol; u <= v + tol on Dirichlet
  for (int s = 0; s < t.nslots(); ++s) {
    int node = t.node_of_slot[static_cast<size_t>(s)];
    double fv = f.v[static_cast<size_t>(node)];
    if (ma_monotone(u, t, s) < fv - tol) {
      res.note = "precondition violated: ma(u) < f at an interior node";
      return res;
    }
    if (ma_monotone(v, t, s) > fv + tol) {
      res.note = "precondition violated: ma(v) > f at an interior node";
      return res;
    }
  }
  const int ns = cg.stored_sheets();
  for (int s = 0; s < ns; ++s)
    for (int id = 0; id < cg.nbase; ++id) {
      if (cg.base.klass(id) != NodeClass::Boundary) continue;
      int node = cg.stored_node(id, s);
      if (u.v[static_cast<size_t>(node)] >
          v.v[static_cast<size_t>(node)] + tol) {
        res.note = "precondition violated: u > v on the Dirichlet set";
        return res;
      }
    }
  res.pre_ok = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < ns; ++s)
    for (int id = 0; id < cg.nbase; ++id) {
      if (cg.base.klass(id) == NodeClass::Outside) continue;
      int node = cg.stored_node(id, s);
      worst = std::max(worst, u.v[static_cast<size_t>(node)] -
                                  v.v[static_cast<size_t>(node)]);
    }
  res.worst_gap = worst;
  res.passed = worst <= tol;
  return res;
}

double interp_sheet(const MultiField& u, int sidx, Vec2 pos) {
  const CoverGrid& cg = *u.cg;
  const GridSpec& g = cg.base.spec;
  double fx = (pos.x - g.origin.x) / g.h;
  double fy = (pos.y - g.origin.y) / g.h;
  int i = static_cast<int>(std::floor(fx));
  int j = static_cast<int>(std::floor(fy));
  if (i < 0 || j < 0 || i + 1 >= g.nx || j + 1 >= g.ny)
    throw Error(ErrorKind::Range, "interp: position outside lattice");
  double sx = fx - i, sy = fy - j;
  double vals[4];
  const int ii[4] = {i, i + 1, i, i + 1}, jj[4] = {j, j, j + 1, j + 1};
  for (int k = 0; k < 4; ++k) {
    int id = g.id(ii[k], jj[k]);
    if (cg.base.klass(id) == NodeClass::Outside)
      throw Error(ErrorKind::Range, "interp: cell corner carries no value");
    vals[k] = u.at_stored(id, sidx);
  }
  return vals[0] * (1 - sx) * (1 - sy) + vals[1] * sx * (1 - sy) +
         vals[2] * (1 - sx) * sy + vals[3] * sx * sy;
}

GrowthReport boundary_growth_diagnostic(const MultiField& u,
                                        const DeckTwist& twist) {
  if (twist.kind != DeckTwist::Kind::Scale)
    throw Error(ErrorKind::Domain, "growth diagnostic requires a Scale twist");
  const CoverGrid& cg = *u.cg;
  const GridSpec& g = cg.base.spec;
  GrowthReport rep;

  double margin = 0.0;
  for (int id = 0; id < cg.nbase; ++id)
    if (cg.base.klass(id) != NodeClass::Outside)
      rep.C_global = std::max(rep.C_global, u.at_stored(id, 0));

  auto bps = cg.all_branch_points();
  double gamma_gap = std::numeric_limits<double>::infinity();
  for (const Vec2& bp : bps) {
    Vec2 pr = cg.base.region.outer.project_to_boundary(bp);
    gamma_gap = std::min(gamma_gap, (bp - pr).norm());
  }

  for (int id = 0; id < cg.nbase; ++id) {
    if (cg.base.klass(id) != NodeClass::Boundary) continue;
    Vec2 xb = cg.base.boundary_proj[static_cast<size_t>(id)];
    if (cg.base.region.in_hole(xb)) continue;
    Vec2 nu = cg.base.region.outer.inward_normal(xb);
    double base_val;
    try {
      base_val = interp_sheet(u, 0, xb + nu * (0.5 * g.h));
    } catch (const Error&) {
      continue;
    }
    for (double tstep : {2.0, 4.0, 8.0}) {
      double tt = tstep * g.h;
      double v;
      try {
        v = interp_sheet(u, 0, xb + nu * tt);
      } catch (const Error&) {
        continue;
      }
      rep.C_normal = std::max(rep.C_normal, (v - base_val) / tt);
      margin = std::max(margin, tt);
    }
  }
  rep.C = std::max(rep.C_normal, rep.C_global);
  rep.eps = std::min(gamma_gap, margin);
  return rep;
}

}  // namespace bma
