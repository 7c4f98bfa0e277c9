#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bma/geometry.hpp"

namespace bma {

/// Sheet structure of a cover: finite cyclic (k sheets, mod-k transitions)
/// or a truncated integer window of the infinite cover.
struct SheetModel {
  enum class Kind { CyclicK, IntegerWindow };
  Kind kind = Kind::CyclicK;
  int k = 2;
  int lo = 0, hi = 0;

  static SheetModel cyclic(int k);
  static SheetModel window(int lo, int hi);

  int stored_count() const {
    return kind == Kind::CyclicK ? k : hi - lo + 1;
  }
  bool in_window(long sheet) const {
    return kind == Kind::CyclicK || (sheet >= lo && sheet <= hi);
  }
  /// Storage slot for a sheet; cyclic wraps, window requires in_window.
  int store_index(long sheet) const;
  /// Nearest stored sheet (window covers clamp, cyclic wraps).
  long clamp_sheet(long sheet) const;
};

/// Rule transporting values between consecutive sheets.
struct DeckTwist {
  enum class Kind { Periodic, Scale, Affine, AdditiveShift };
  Kind kind = Kind::Periodic;
  double c = 1.0;      // Scale factor per positive crossing
  Mat2 T;              // Affine pullback
  double delta = 0.0;  // AdditiveShift per positive crossing

  static DeckTwist periodic() { return {}; }
  static DeckTwist scale(double c);
  static DeckTwist affine(const Mat2& T);
  static DeckTwist additive(double delta);

  /// Value/position transported by `dsheet` sheets:
  ///   Periodic -> (value, at); Scale(c) -> (c^d value, at);
  ///   Affine(T) -> (value, T^d at); AdditiveShift -> (value + d*delta, at).
  std::pair<double, Vec2> transport(double value, Vec2 at, int dsheet) const;
};

/// Finite-difference grid on the cover of (region minus branch set).
/// Nodes are (base node, sheet); crossing a cut in its positive direction
/// increments the sheet. Immutable after build.
struct CoverGrid {
  BaseGrid base;
  std::vector<CutSurface> cuts;
  SheetModel sheets;

  int nbase = 0;
  std::vector<int> interior_base;            // base ids, fixed order
  std::vector<unsigned char> branch_adjacent;  // per base id

  static CoverGrid build(const Region& region, const GridSpec& spec,
                         std::vector<CutSurface> cuts, SheetModel sheets);

  int stored_sheets() const { return sheets.stored_count(); }
  int stored_node(int baseid, int sidx) const { return sidx * nbase + baseid; }
  long stored_total() const {
    return static_cast<long>(stored_sheets()) * nbase;
  }

  /// Signed crossing count of segment a->b over all cuts.
  /// Throws BranchCollision if the segment passes through a branch point.
  int crossings(Vec2 a, Vec2 b) const;

  struct Ray {
    enum class Kind { Interior, Boundary, Outside, Branch };
    Kind kind = Kind::Outside;
    int base = -1;
    long sheet = 0;  // unwrapped
  };

  /// Walk `steps` offsets of (dx,dy) from (baseid, sheet), accumulating
  /// signed cut crossings. Stops early at a boundary node (boundary-hit
  /// result); Outside if the path leaves the grid's value-carrying set;
  /// Branch if a segment hits a branch point.
  Ray neighbor(int baseid, long sheet, int dx, int dy, int steps) const;

  std::vector<Vec2> all_branch_points() const;
};

/// One scalar per cover node, stored as (sheet slot, base node) planes.
/// An optional twist annotation marks the stored window as a fundamental
/// domain: queries outside the window transport from the nearest stored
/// sheet, which makes deck equivariance exact by representation.
struct MultiField {
  const CoverGrid* cg = nullptr;
  std::vector<double> v;
  std::optional<DeckTwist> twist;

  static MultiField zeros(const CoverGrid& cg);
  static MultiField constant(const CoverGrid& cg, double value);

  double& at_stored(int baseid, int sidx) {
    return v[static_cast<size_t>(cg->stored_node(baseid, sidx))];
  }
  double at_stored(int baseid, int sidx) const {
    return v[static_cast<size_t>(cg->stored_node(baseid, sidx))];
  }

  /// Value at (base, sheet) for any integer sheet; resolves cyclic wrap and
  /// the twist annotation. Affine twists are position-dependent and are not
  /// resolvable through this accessor (use a window closure instead).
  double at(int baseid, long sheet) const;

  double max_abs() const;
};

/// Fill a field from a per-(position, sheet) function on stored sheets
/// (interior + boundary nodes).
void fill(MultiField& f, const std::function<double(Vec2, long)>& fn);

}  // namespace bma
