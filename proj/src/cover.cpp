#include "bma/cover.hpp"

#include <algorithm>
#include <cmath>

namespace bma {

SheetModel SheetModel::cyclic(int k) {
  if (k < 2) throw Error(ErrorKind::Config, "cyclic cover needs k >= 2");
  SheetModel s;
  s.kind = Kind::CyclicK;
  s.k = k;
  return s;
}

SheetModel SheetModel::window(int lo, int hi) {
  if (lo > hi) throw Error(ErrorKind::Config, "window needs lo <= hi");
  SheetModel s;
  s.kind = Kind::IntegerWindow;
  s.lo = lo;
  s.hi = hi;
  return s;
}

int SheetModel::store_index(long sheet) const {
  if (kind == Kind::CyclicK) {
    long m = sheet % k;
    if (m < 0) m += k;
    return static_cast<int>(m);
  }
  if (!in_window(sheet))
    throw Error(ErrorKind::Range, "sheet outside stored window");
  return static_cast<int>(sheet - lo);
}

long SheetModel::clamp_sheet(long sheet) const {
  if (kind == Kind::CyclicK) return sheet;
  return std::clamp(sheet, static_cast<long>(lo), static_cast<long>(hi));
}

DeckTwist DeckTwist::scale(double c) {
  if (!(c > 0)) throw Error(ErrorKind::Config, "scale twist needs c > 0");
  DeckTwist t;
  t.kind = Kind::Scale;
  t.c = c;
  return t;
}

DeckTwist DeckTwist::affine(const Mat2& T) {
  if (std::abs(T.det() - 1.0) > 1e-12)
    throw Error(ErrorKind::Config, "affine twist needs det(T) = 1");
  DeckTwist t;
  t.kind = Kind::Affine;
  t.T = T;
  return t;
}

DeckTwist DeckTwist::additive(double delta) {
  DeckTwist t;
  t.kind = Kind::AdditiveShift;
  t.delta = delta;
  return t;
}

std::pair<double, Vec2> DeckTwist::transport(double value, Vec2 at,
                                             int dsheet) const {
  switch (kind) {
    case Kind::Periodic:
      return {value, at};
    case Kind::Scale:
      return {value * std::pow(c, dsheet), at};
    case Kind::Affine:
      return {value, T.pow(dsheet).apply(at)};
    case Kind::AdditiveShift:
      return {value + delta * dsheet, at};
  }
  return {value, at};
}

CoverGrid CoverGrid::build(const Region& region, const GridSpec& spec,
                           std::vector<CutSurface> cuts, SheetModel sheets) {
  // snap all cuts to dual lines so no node sits on a cut and axis rays
  // cannot hit a branch point
  for (CutSurface& c : cuts) c = c.snapped(spec.origin, spec.h, region);

  CoverGrid cg;
  cg.base = BaseGrid::build(region, spec, cuts);
  cg.cuts = std::move(cuts);
  cg.sheets = sheets;
  cg.nbase = spec.count();

  for (int id = 0; id < cg.nbase; ++id)
    if (cg.base.interior(id)) cg.interior_base.push_back(id);

  cg.branch_adjacent.assign(static_cast<size_t>(cg.nbase), 0);
  auto bps = cg.all_branch_points();
  for (int id : cg.interior_base) {
    Vec2 p = spec.pos(id);
    for (const Vec2& bp : bps)
      if ((p - bp).norm() <= spec.h * 1.2)
        cg.branch_adjacent[static_cast<size_t>(id)] = 1;
  }
  return cg;
}

std::vector<Vec2> CoverGrid::all_branch_points() const {
  std::vector<Vec2> bps;
  for (const CutSurface& c : cuts)
    bps.insert(bps.end(), c.branch_points.begin(), c.branch_points.end());
  return bps;
}

int CoverGrid::crossings(Vec2 a, Vec2 b) const {
  int s = 0;
  for (const CutSurface& c : cuts) s += c.crossing(a, b);
  return s;
}

CoverGrid::Ray CoverGrid::neighbor(int baseid, long sheet, int dx, int dy,
                                   int steps) const {
  const GridSpec& g = base.spec;
  int i = g.i_of(baseid), j = g.j_of(baseid);
  Vec2 p = g.pos(i, j);
  Ray r;
  r.sheet = sheet;
  for (int s = 0; s < steps; ++s) {
    int ii = i + dx, jj = j + dy;
    if (!g.in_lattice(ii, jj)) {
      r.kind = Ray::Kind::Outside;
      r.base = -1;
      return r;
    }
    Vec2 q = g.pos(ii, jj);
    int dsh;
    try {
      dsh = crossings(p, q);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BranchCollision) {
        r.kind = Ray::Kind::Branch;
        r.base = -1;
        return r;
      }
      throw;
    }
    r.sheet += dsh;
    i = ii;
    j = jj;
    p = q;
    r.base = g.id(i, j);
    NodeClass k = base.klass(r.base);
    if (k == NodeClass::Boundary) {
      r.kind = Ray::Kind::Boundary;
      return r;
    }
    if (k == NodeClass::Outside) {
      r.kind = Ray::Kind::Outside;
      return r;
    }
  }
  r.kind = Ray::Kind::Interior;
  return r;
}

MultiField MultiField::zeros(const CoverGrid& cg) {
  MultiField f;
  f.cg = &cg;
  f.v.assign(static_cast<size_t>(cg.stored_total()), 0.0);
  return f;
}

MultiField MultiField::constant(const CoverGrid& cg, double value) {
  MultiField f = zeros(cg);
  std::fill(f.v.begin(), f.v.end(), value);
  return f;
}

double MultiField::at(int baseid, long sheet) const {
  const SheetModel& sm = cg->sheets;
  if (sm.in_window(sheet))
    return at_stored(baseid, sm.store_index(sheet));
  if (!twist)
    throw Error(ErrorKind::Range,
                "sheet outside stored window and no twist annotation");
  long s0 = sm.clamp_sheet(sheet);
  double base_val = at_stored(baseid, sm.store_index(s0));
  if (twist->kind == DeckTwist::Kind::Affine)
    throw Error(ErrorKind::Range,
                "affine twist is position-dependent; use a window closure");
  return twist->transport(base_val, Vec2{}, static_cast<int>(sheet - s0)).first;
}

double MultiField::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void fill(MultiField& f, const std::function<double(Vec2, long)>& fn) {
  const CoverGrid& cg = *f.cg;
  int ns = cg.stored_sheets();
  for (int s = 0; s < ns; ++s) {
    long sheet = cg.sheets.kind == SheetModel::Kind::CyclicK
                     ? s
                     : cg.sheets.lo + s;
    for (int id = 0; id < cg.nbase; ++id) {
      NodeClass k = cg.base.klass(id);
      if (k == NodeClass::Outside) continue;
      f.at_stored(id, s) = fn(cg.base.spec.pos(id), sheet);
    }
  }
}

}  // namespace bma
