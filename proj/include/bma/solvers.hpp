#pragma once

#include <functional>

#include "bma/operators.hpp"

namespace bma {

/// Lifted discrete ball: the connected lift of a base ball around a center
/// cover node, as a set of updatable table slots. Its Dirichlet data is the
/// adjacent node layer (read through the stencil arms).
struct BallRegion {
  int center_base = -1;
  int center_sidx = 0;
  double radius = 0.0;
  std::vector<int> slots;
};

/// Connected lift of the base ball around (center_base, center_sidx) as a
/// set of updatable slots; the ball must miss the branch set.
BallRegion make_ball(const CoverGrid& cg, const StencilTables& t,
                     const std::vector<unsigned char>& updatable,
                     int center_base, int center_sidx, double radius);

/// Updatable-slot mask: every slot whose axis stencil is resolvable.
std::vector<unsigned char> default_updatable(const StencilTables& t);

/// Finite overlapping cover of balls visited round-robin; every updatable
/// slot belongs to at least one ball.
struct BallSchedule {
  std::vector<BallRegion> balls;

  /// `radius_h`/`stride_h` in grid steps. Balls never contain a branch
  /// point; nodes near branch points are covered by offset rings of smaller
  /// balls, with per-node fallback balls as a last resort.
  static BallSchedule build(const CoverGrid& cg, const StencilTables& t,
                            const std::vector<unsigned char>& updatable,
                            double radius_h = 6.0, double stride_h = 3.0);
};

struct SolveReport {
  int iterations = 0;       // sweeps (Perron) or Newton iterations
  double residual = 0.0;    // final ma-f infinity norm over updatable slots
  double max_update = 0.0;  // last sweep's max node change
  double wall_s = 0.0;
  bool converged = false;
};

struct NewtonOpts {
  int max_iter = 60;
  double tol = 1e-10;       // residual infinity norm
  int max_halvings = 20;
  int gs_warmup = 0;        // pointwise sweeps before Newton
};

/// Pointwise nonlinear Gauss-Seidel update at one slot: replaces the center
/// value by the smallest root of ma(u; center) = f. Returns the new value.
double pointwise_ma_update(MultiField& u, const StencilTables& t, int slot,
                           double f);

/// One Gauss-Seidel sweep over `slots`; returns the max absolute update.
double gs_sweep(MultiField& u, const StencilTables& t,
                const std::vector<int>& slots, const MultiField& f);

/// Damped semismooth Newton for ma(u) = f on `slots` (all other nodes act
/// as Dirichlet data). Falls back to a Gauss-Seidel pass when 20 step
/// halvings fail to reduce the residual. Throws Diverged on failure.
SolveReport newton_ma(MultiField& u, const StencilTables& t,
                      const std::vector<int>& slots, const MultiField& f,
                      const NewtonOpts& opts);

/// Dirichlet Monge-Ampere solve on a lifted ball with boundary data taken
/// from the current field (the T_B operator). f >= 0 required (f < 0 is a
/// domain error). Returns the max absolute change.
double solve_ma_ball(MultiField& u, const StencilTables& t,
                     const BallRegion& ball, const MultiField& f,
                     double tol_ball);

/// Whole-domain Monge-Ampere solve over all updatable slots.
SolveReport solve_ma_domain(MultiField& u, const StencilTables& t,
                            const std::vector<unsigned char>& updatable,
                            const MultiField& f, const NewtonOpts& opts);

/// Discrete harmonic field on the cover: 5-point Laplacian, Dirichlet data
/// from the field's boundary nodes (and window closures). Direct sparse
/// solve; verifies relative residual <= 1e-10.
void solve_laplace_cover(MultiField& u, const StencilTables& t,
                         const std::vector<unsigned char>& updatable);

struct PerronOpts {
  double tol = 1e-9;          // stop when a full sweep moves no node more
  int max_sweeps = 10000;
  double tol_ball = 1e-10;
  double tol_sub = 1e-6;      // required initial subsolution slack
  bool check_subsolution = true;
  std::function<void(int, double, double)> on_sweep;  // (sweep, max_upd, res)
};

/// Perron ball iteration: round-robin T_B sweeps from a subsolution.
/// Monotone by construction (ball results are clamped from below by the
/// incumbent, so per-sweep updates are >= 0). Stops when a sweep changes no
/// node by more than tol.
SolveReport perron(MultiField& u, const StencilTables& t,
                   const BallSchedule& schedule,
                   const std::vector<unsigned char>& updatable,
                   const MultiField& f, const PerronOpts& opts);

/// Re-apply every scheduled ball to a converged field, measuring the
/// largest node change (fixed-point audit). Does not modify u.
double perron_fixed_point_gap(const MultiField& u, const StencilTables& t,
                              const BallSchedule& schedule, const MultiField& f,
                              double tol_ball);

/// Residual infinity norm max |ma(u)-f| over updatable slots.
double ma_residual_norm(const MultiField& u, const StencilTables& t,
                        const std::vector<unsigned char>& updatable,
                        const MultiField& f);

struct ComparisonResult {
  bool pre_ok = false;
  bool passed = false;
  double worst_gap = 0.0;  // max(u - v) over all stored nodes
  std::string note;
};

/// Discrete comparison: with ma(u) >= f >= ma(v) within tol at interior
/// slots and u <= v + tol on the Dirichlet set, checks u <= v + tol
/// everywhere.
ComparisonResult comparison_check(const MultiField& u, const MultiField& v,
                                  const MultiField& f, const StencilTables& t,
                                  double tol);

struct GrowthReport {
  double C = 0.0;
  double eps = 0.0;
  double C_normal = 0.0;   // boundary-ray bound constant
  double C_global = 0.0;   // sheet-sup bound constant
};

/// Empirical constants for the boundary growth bounds of a Scale-twist
/// field: v(x+t nu, k) <= v(x,k) + C e^{k/n} t and v(x,k) <= C e^{k/n},
/// fitted on the fundamental sheet.
GrowthReport boundary_growth_diagnostic(const MultiField& u,
                                        const DeckTwist& twist);

/// Bilinear interpolation of one stored sheet at an arbitrary position;
/// requires all four cell corners to carry values.
double interp_sheet(const MultiField& u, int sidx, Vec2 pos);

}  // namespace bma
