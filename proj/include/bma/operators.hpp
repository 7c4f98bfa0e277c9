#pragma once

#include <Eigen/Dense>
#include <functional>

#include "bma/cover.hpp"

namespace bma {

/// Orthogonal direction pairs of integer grid offsets. The axis pair is
/// always first; `radius` is the Chebyshev radius in grid steps.
struct StencilSet {
  struct DirPair {
    int ax, ay;  // first direction
    int bx, by;  // orthogonal partner
  };
  std::vector<DirPair> pairs;
  int radius = 3;

  /// Default set: 8 pairs within Chebyshev radius 3.
  static StencilSet standard(int radius = 3);

  int ndir() const { return static_cast<int>(pairs.size()) * 2; }
  void dir(int d, int& dx, int& dy) const {
    const DirPair& p = pairs[static_cast<size_t>(d / 2)];
    if (d % 2 == 0) { dx = p.ax; dy = p.ay; } else { dx = p.bx; dy = p.by; }
  }
};

/// Resolved stencil arms for every interior cover node, baked once per
/// cover: sheet wraps, twist transport factors and window closures are
/// precomputed so operator evaluation is pure array math.
struct StencilTables {
  struct Arm {
    enum class Kind : unsigned char { Stored, Fixed, Dropped };
    Kind kind = Kind::Dropped;
    int8_t cross = 0;   // sheet overflow beyond the stored window
    int32_t idx = -1;   // stored flat node or fixed-value index
  };

  const CoverGrid* cg = nullptr;
  StencilSet stencil;
  std::vector<int> node_of_slot;  // slot -> stored cover node
  std::vector<int> slot_of_node;  // stored cover node -> slot or -1
  std::vector<Arm> arms;          // slot * ndir * 2 + dir * 2 + (0:+, 1:-)
  std::vector<double> fixed_vals;
  std::vector<double> len2;       // squared arm length per direction
  DeckTwist::Kind twist_kind = DeckTwist::Kind::Periodic;
  double twist_c = 1.0;
  double twist_delta = 0.0;

  int nslots() const { return static_cast<int>(node_of_slot.size()); }
  int ndir() const { return stencil.ndir(); }

  const Arm& arm(int slot, int d, int side) const {
    return arms[(static_cast<size_t>(slot) * ndir() + d) * 2 + side];
  }

  double arm_value(const MultiField& u, const Arm& a) const;

  /// Second directional difference at a slot; false if the direction is
  /// unresolvable (dropped arm).
  bool second_difference(const MultiField& u, int slot, int d,
                         double center, double& out) const;
};

/// Bake stencil tables. `closure` supplies values beyond a window cover's
/// stored sheets (evaluated at the arm end's base position and unwrapped
/// sheet); `twist` makes out-of-window arms transport from the clamped
/// stored sheet instead. Arms whose ray leaves the grid or hits a branch
/// point are dropped.
StencilTables build_tables(
    const CoverGrid& cg, const StencilSet& stencil,
    const std::optional<DeckTwist>& twist = std::nullopt,
    const std::function<double(Vec2, long)>& closure = nullptr);

/// Central-difference Hessian determinant of a scalar field sampler at x;
/// O(step^2) for C^4 fields. Throws Domain if the sampler returns non-finite.
double fd_hessian_det(const std::function<double(const Eigen::VectorXd&)>& F,
                      const Eigen::VectorXd& x, double step);

/// Richardson-extrapolated variant (steps h and h/2), O(step^4).
double fd_hessian_det_rich(
    const std::function<double(const Eigen::VectorXd&)>& F,
    const Eigen::VectorXd& x, double step);

/// Monotone wide-stencil Monge-Ampere operator at an interior node:
/// min over direction pairs of the product of positive parts of second
/// directional differences. Degenerate elliptic; consistent with det(D^2 u)
/// to O(h^2 + dtheta) on smooth convex fields. Nondecreasing in off-node
/// values (equivalently, the scheme f - ma is monotone nonincreasing).
double ma_monotone(const MultiField& u, const StencilTables& t, int slot);

/// 5-point cover-aware Laplacian at an interior node.
double laplace_discrete(const MultiField& u, const StencilTables& t, int slot);

struct ConvexityReport {
  bool passed = true;
  double min_second_difference = 0.0;
  int worst_node = -1;  // stored cover node
  int worst_dir = -1;
};

/// Scan all resolvable second directional differences; passes iff all
/// are >= -tol.
ConvexityReport convexity_check(const MultiField& u, const StencilTables& t,
                                double tol);

/// min over interior slots of (ma_monotone(u) - f); >= -tol certifies a
/// discrete subsolution. `skip` marks slots to ignore (e.g. clamped nodes).
double subsolution_residual(const MultiField& u, const MultiField& f,
                            const StencilTables& t,
                            const std::vector<unsigned char>* skip = nullptr);

}  // namespace bma
