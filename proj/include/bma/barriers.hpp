#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bma/geometry.hpp"
#include "bma/numerics.hpp"

namespace bma {

using VecN = Eigen::VectorXd;
using MatN = Eigen::MatrixXd;

/// Analytically differentiable scalar field. Gradient/Hessian rules are
/// optional; gradient() falls back to central differences.
struct BarrierFn {
  int dim = 2;
  std::string name;
  std::function<double(const VecN&)> value;
  std::function<VecN(const VecN&)> grad;
  std::function<MatN(const VecN&)> hess;  // empty -> numeric-only

  double operator()(const VecN& x) const { return value(x); }
  VecN gradient(const VecN& x, double step = 1e-6) const;
  bool analytic_gradient() const { return static_cast<bool>(grad); }
};

/// Deterministic low-discrepancy point in [0,1)^dim (Halton).
VecN halton_point(int index, int dim);

/// Strictly convex body abstraction for barrier constructions: 2-d disks
/// and ellipses, n-d balls.
struct BarrierDomain {
  int dim = 2;
  double diameter = 2.0;
  double max_curvature_radius = 1.0;
  std::function<bool(const VecN&)> contains;
  std::function<VecN(int, int)> boundary_sample;   // (i, N) deterministic
  std::function<VecN(const VecN&)> inward_normal;  // at boundary points
  std::function<VecN(int)> interior_sample;        // deterministic, dense

  static BarrierDomain from_convex2(const ConvexDomain& d);
  static BarrierDomain ball(const VecN& center, double radius);
};

/// P(x) = (1/2) b^{1/n} |x-x0|^2 + offset; det(D^2 P) = b exactly.
BarrierFn quadratic_subsolution(double b, const VecN& x0, double offset);

struct SupportingSphere {
  VecN xbar;
  double radius = 0.0;   // |xbar - xi|
  double margin = 0.0;   // verified min of Phi - w_xi outside the exclusion
  BarrierFn w;           // w_xi(x) = Phi(xi) + (|x-xbar|^2 - |xi-xbar|^2)/2
};

struct SupportingSphereOpts {
  int n_samples = 10000;
  double exclusion = 1e-3;  // radius of the neighborhood of xi ignored
  int max_doublings = 40;
  double grad_inf_hint = -1.0;  // ||grad Phi||_inf; estimated when < 0
};

/// Center on the inner-normal ray with the tangential gradient offset:
/// xbar = xi - grad_tan Phi(xi) + R nu_in(xi), R doubled from a
/// curvature-based guess until w_xi < Phi holds at every sample point
/// outside the exclusion ball. Throws BarrierFailure when the cap is hit.
SupportingSphere supporting_sphere(const BarrierDomain& dom,
                                   const BarrierFn& Phi, const VecN& xi,
                                   const SupportingSphereOpts& opts = {});

struct ConvexExtension {
  BarrierFn V;
  std::vector<VecN> xis;
  std::vector<VecN> xbars;
  std::vector<double> phi_xi;
  double b = 1.0;
  /// max of V over a sampled boundary (the threshold of the classical
  /// plane-curve construction).
  double beta_on(const BarrierDomain& outer, int n_samples = 10000) const;
};

/// V = v on the closure of Omega, sup over boundary spheres of
/// b^{1/n} w_xi outside; convex viscosity subsolution of det = b.
/// `v` must be convex with v = 0 on the boundary and det(D^2 v) >= b
/// (sampled pre-check with tolerance `det_tol` unless skip_precheck).
ConvexExtension convex_extension(const BarrierDomain& omega, const BarrierFn& v,
                                 double b, int n_xi = 2048,
                                 double det_tol = 1e-4,
                                 bool skip_precheck = false,
                                 double precheck_step = 1e-4);

/// Radial solution profile W(rho) = base + int_{lower}^{rho} g(s) ds with
/// cached cumulative knots; evaluation refines from the nearest knot.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::function<double(double)> g, double lower, double upper,
                double base, double dknot = 0.25);
  double eval(double rho) const;
  double deriv(double rho) const { return g_(rho); }

 private:
  std::function<double(double)> g_;
  double lower_ = 0.0, base_ = 0.0;
  std::vector<double> knot_r_, knot_w_;
};

/// w_a(x) = base + int_{2 R2}^{rho(x)} (s^n + a)^{1/n} ds with
/// rho(x) = |A^{1/2} x + A^{-1/2} b|, det(A) = 1; det(D^2 w_a) = 1 away
/// from rho = 0.
BarrierFn radial_family(int n, double a, const MatN& A, const VecN& b,
                        double R2, double base);

/// Asymptotic offset: w_a = (1/2) rho^2 + mu + O(rho^{2-n});
/// mu = base - 2 R2^2 + int_{2R2}^inf [(s^n+a)^{1/n} - s] ds.
/// Requires n >= 3 (convergent tail).
double mu_offset(int n, double a, double R2, double base);

/// Exterior supersolution: 0 for rho <= R4, int_{R4}^rho (s^n - R4^n)^{1/n}
/// otherwise; C^1 across rho = R4, det = 1 outside.
BarrierFn exterior_supersolution(int n, double R4, const MatN& A,
                                 const VecN& b);

/// Its asymptotic offset beta-bar: w+ = (1/2) rho^2 + beta + O(rho^{2-n}).
double exterior_offset(int n, double R4);

/// Offset table mu(a) over an a-grid for one quadratic form.
struct OffsetTable {
  int n = 3;
  double R2 = 1.0;
  double base = 0.0;
  MatN A;
  VecN b;
  double c = 0.0;
  std::vector<double> a_grid;
  std::vector<double> mu;

  static OffsetTable build(int n, const MatN& A, const VecN& b, double c,
                           double R2, double base,
                           const std::vector<double>& a_grid);
};

/// Solve mu_m(a_m) = mu_1(a) on the monotone table by bisection;
/// |residual| <= 1e-8. Throws Range when the target leaves the table.
double match_offsets(const OffsetTable& table_m, const OffsetTable& table_1,
                     double a);

/// Profile f of the singular solution f(x1) |(x2,x3)|^{4/3}:
/// f'' = 27/(16 f^2) + 4 f'^2 / f, f(0) = f0, f'(0) = 0 (even in x1).
/// Throws BarrierFailure when the profile blows up inside |x1| < 3/2.
OdeTrajectory pogorelov_profile(double f0, double t_end = 1.55);

/// f0 that puts the profile blow-up at x1 = +-2.
double pogorelov_default_f0();

/// Singular solution vanishing on the e-line (e a unit vector in the
/// x1x2-plane), det(D^2 P) = 1 away from the line; validated against the
/// FD oracle on a deterministic sample set before being returned.
BarrierFn pogorelov(const VecN& e, double f0);

/// h0(x) = max_j { x . e_j + P_{e_j}(x) }; requires pairwise e_i . e_j > -1.
BarrierFn mercedes_barrier(const VecN& e1, const VecN& e2, const VecN& e3,
                           double f0);

struct CuspBarrier {
  BarrierFn phi_tilde;  // Phi + K |x_n|
  double K = 0.0;
  double min_one_sided_slope = 0.0;  // over cut samples and |m| <= 2
};

/// Phi + K |x_n| with K = 2 max sampled one-sided slope deficit + 1;
/// the one-sided derivative conditions are checked by one-sided
/// differences at cut sample points for T^m, |m| <= 2.
CuspBarrier cusp_barrier(const BarrierFn& Phi,
                         const std::function<VecN(int)>& cut_samples,
                         int n_samples,
                         const std::function<VecN(const VecN&, int)>& Tpow);

struct GradientCheckReport {
  bool passed = true;
  double worst_rel_err = 0.0;
};

/// Analytic gradient vs central differences at deterministic sample points.
GradientCheckReport gradient_check(const BarrierFn& f,
                                   const std::function<VecN(int)>& sample,
                                   int n = 100, double step = 1e-5,
                                   double rel_tol = 1e-4);

}  // namespace bma
