#include "bma/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bma {

StencilSet StencilSet::standard(int radius) {
  StencilSet s;
  s.radius = radius;
  // primitive directions with angle in [0, 90), Chebyshev radius bound;
  // each contributes the orthogonal pair (v, v_perp)
  std::vector<std::pair<int, int>> dirs;
  for (int q = 0; q <= radius; ++q)
    for (int p = 1; p <= radius; ++p) {
      if (std::gcd(p, q) != 1) continue;
      dirs.push_back({p, q});
    }
  std::sort(dirs.begin(), dirs.end(), [](auto a, auto b) {
    return std::atan2(a.second, a.first) < std::atan2(b.second, b.first);
  });
  for (auto [p, q] : dirs) s.pairs.push_back({p, q, -q, p});
  return s;
}

double StencilTables::arm_value(const MultiField& u, const Arm& a) const {
  if (a.kind == Arm::Kind::Fixed) return fixed_vals[static_cast<size_t>(a.idx)];
  double val = u.v[static_cast<size_t>(a.idx)];
  if (a.cross != 0) {
    if (twist_kind == DeckTwist::Kind::Scale)
      val *= std::pow(twist_c, a.cross);
    else if (twist_kind == DeckTwist::Kind::AdditiveShift)
      val += twist_delta * a.cross;
  }
  return val;
}

bool StencilTables::second_difference(const MultiField& u, int slot, int d,
                                      double center, double& out) const {
  const Arm& ap = arm(slot, d, 0);
  const Arm& am = arm(slot, d, 1);
  if (ap.kind == Arm::Kind::Dropped || am.kind == Arm::Kind::Dropped)
    return false;
  out = (arm_value(u, ap) + arm_value(u, am) - 2.0 * center) /
        len2[static_cast<size_t>(d)];
  return true;
}

StencilTables build_tables(const CoverGrid& cg, const StencilSet& stencil,
                           const std::optional<DeckTwist>& twist,
                           const std::function<double(Vec2, long)>& closure) {
  StencilTables t;
  t.cg = &cg;
  t.stencil = stencil;
  if (twist) {
    t.twist_kind = twist->kind;
    t.twist_c = twist->c;
    t.twist_delta = twist->delta;
  }
  const double h = cg.base.spec.h;
  const int ndir = stencil.ndir();
  t.len2.resize(static_cast<size_t>(ndir));
  for (int d = 0; d < ndir; ++d) {
    int dx, dy;
    stencil.dir(d, dx, dy);
    t.len2[static_cast<size_t>(d)] = (dx * dx + dy * dy) * h * h;
  }

  const int ns = cg.stored_sheets();
  t.slot_of_node.assign(static_cast<size_t>(cg.stored_total()), -1);
  for (int s = 0; s < ns; ++s)
    for (int id : cg.interior_base) {
      int node = cg.stored_node(id, s);
      t.slot_of_node[static_cast<size_t>(node)] =
          static_cast<int>(t.node_of_slot.size());
      t.node_of_slot.push_back(node);
    }

  t.arms.assign(static_cast<size_t>(t.node_of_slot.size()) * ndir * 2, {});

  const SheetModel& sm = cg.sheets;
  for (size_t slot = 0; slot < t.node_of_slot.size(); ++slot) {
    int node = t.node_of_slot[slot];
    int sidx = node / cg.nbase;
    int baseid = node % cg.nbase;
    long sheet = sm.kind == SheetModel::Kind::CyclicK ? sidx : sm.lo + sidx;
    for (int d = 0; d < ndir; ++d) {
      int dx, dy;
      stencil.dir(d, dx, dy);
      for (int side = 0; side < 2; ++side) {
        int sx = side == 0 ? dx : -dx;
        int sy = side == 0 ? dy : -dy;
        StencilTables::Arm& a = t.arms[(slot * ndir + d) * 2 + side];
        CoverGrid::Ray r = cg.neighbor(baseid, sheet, sx, sy, 1);
        if (r.kind == CoverGrid::Ray::Kind::Outside ||
            r.kind == CoverGrid::Ray::Kind::Branch) {
          a.kind = StencilTables::Arm::Kind::Dropped;
          continue;
        }
        if (sm.in_window(r.sheet)) {
          a.kind = StencilTables::Arm::Kind::Stored;
          a.cross = 0;
          a.idx = cg.stored_node(r.base, sm.store_index(r.sheet));
        } else if (twist && twist->kind != DeckTwist::Kind::Affine) {
          long s0 = sm.clamp_sheet(r.sheet);
          a.kind = StencilTables::Arm::Kind::Stored;
          a.cross = static_cast<int8_t>(r.sheet - s0);
          a.idx = cg.stored_node(r.base, sm.store_index(s0));
        } else if (closure) {
          a.kind = StencilTables::Arm::Kind::Fixed;
          a.idx = static_cast<int32_t>(t.fixed_vals.size());
          t.fixed_vals.push_back(closure(cg.base.spec.pos(r.base), r.sheet));
        } else {
          a.kind = StencilTables::Arm::Kind::Dropped;
        }
      }
    }
  }
  return t;
}

double fd_hessian_det(const std::function<double(const Eigen::VectorXd&)>& F,
                      const Eigen::VectorXd& x, double step) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd H(n, n);
  const double f0 = F(x);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = step;
    H(i, i) = (F(x + e) - 2.0 * f0 + F(x - e)) / (step * step);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = ei;
      ei[i] = step;
      ej[j] = step;
      double v = (F(x + ei + ej) - F(x + ei - ej) - F(x - ei + ej) +
                  F(x - ei - ej)) /
                 (4.0 * step * step);
      H(i, j) = H(j, i) = v;
    }
  if (!H.allFinite())
    throw Error(ErrorKind::Domain, "fd_hessian_det: sampler undefined at a stencil point");
  return H.determinant();
}

double fd_hessian_det_rich(
    const std::function<double(const Eigen::VectorXd&)>& F,
    const Eigen::VectorXd& x, double step) {
  double dh = fd_hessian_det(F, x, step);
  double dh2 = fd_hessian_det(F, x, 0.5 * step);
  return (4.0 * dh2 - dh) / 3.0;
}

double ma_monotone(const MultiField& u, const StencilTables& t, int slot) {
  const int npairs = static_cast<int>(t.stencil.pairs.size());
  double center = u.v[static_cast<size_t>(t.node_of_slot[static_cast<size_t>(slot)])];
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int p = 0; p < npairs; ++p) {
    double d1, d2;
    if (!t.second_difference(u, slot, 2 * p, center, d1)) continue;
    if (!t.second_difference(u, slot, 2 * p + 1, center, d2)) continue;
    any = true;
    double prod = std::max(d1, 0.0) * std::max(d2, 0.0);
    best = std::min(best, prod);
    if (best == 0.0) break;
  }
  if (!any)
    throw Error(ErrorKind::StencilDegenerate,
                "ma_monotone: no resolvable direction pair");
  return best;
}

double laplace_discrete(const MultiField& u, const StencilTables& t,
                        int slot) {
  double center = u.v[static_cast<size_t>(t.node_of_slot[static_cast<size_t>(slot)])];
  double d1, d2;
  if (!t.second_difference(u, slot, 0, center, d1) ||
      !t.second_difference(u, slot, 1, center, d2))
    throw Error(ErrorKind::BranchCollision,
                "laplace_discrete: axis stencil unresolvable");
  return d1 + d2;
}

ConvexityReport convexity_check(const MultiField& u, const StencilTables& t,
                                double tol) {
  ConvexityReport rep;
  rep.min_second_difference = std::numeric_limits<double>::infinity();
  const int ndir = t.ndir();
  for (int slot = 0; slot < t.nslots(); ++slot) {
    double center =
        u.v[static_cast<size_t>(t.node_of_slot[static_cast<size_t>(slot)])];
    for (int d = 0; d < ndir; ++d) {
      double dd;
      if (!t.second_difference(u, slot, d, center, dd)) continue;
      if (dd < rep.min_second_difference) {
        rep.min_second_difference = dd;
        rep.worst_node = t.node_of_slot[static_cast<size_t>(slot)];
        rep.worst_dir = d;
      }
    }
  }
  rep.passed = rep.min_second_difference >= -tol;
  return rep;
}

double subsolution_residual(const MultiField& u, const MultiField& f,
                            const StencilTables& t,
                            const std::vector<unsigned char>* skip) {
  double worst = std::numeric_limits<double>::infinity();
  for (int slot = 0; slot < t.nslots(); ++slot) {
    if (skip && (*skip)[static_cast<size_t>(slot)]) continue;
    int node = t.node_of_slot[static_cast<size_t>(slot)];
    double r = ma_monotone(u, t, slot) - f.v[static_cast<size_t>(node)];
    worst = std::min(worst, r);
  }
  return worst;
}

}  // namespace bma
