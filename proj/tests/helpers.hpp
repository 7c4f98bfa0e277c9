#pragma once

#include <cmath>

#include "bma/cover.hpp"

namespace bma::testing {

inline Region unit_disk_region() {
  return Region{ConvexDomain::disk({0, 0}, 1.0), std::nullopt};
}

inline CoverGrid plain_disk_cover(int n) {
  Region reg = unit_disk_region();
  GridSpec g = GridSpec::cover_region(reg, n);
  return CoverGrid::build(reg, g, {}, SheetModel::window(0, 0));
}

inline CoverGrid slit_disk_cover(int n, int k) {
  Region reg = unit_disk_region();
  GridSpec g = GridSpec::cover_region(reg, n);
  CutSurface cut = CutSurface::from_segment({0, 0}, {1.2, 0}, {0, 1}, reg);
  return CoverGrid::build(reg, g, {cut}, SheetModel::cyclic(k));
}

/// Polar angle about `bp` whose branch jump lies exactly on the horizontal
/// cut ray {y = cut_level, x > bp.x}; range [0, 2pi) away from the sliver.
inline double cut_angle(Vec2 p, Vec2 bp, double cut_level) {
  double raw = std::atan2(p.y - bp.y, p.x - bp.x);
  if (raw < 0) raw += 2 * kPi;
  if (p.x > bp.x && p.y >= bp.y && p.y < cut_level) raw += 2 * kPi;
  return raw;
}

}  // namespace bma::testing
