#pragma once

#include <functional>
#include <vector>

namespace bma {

/// Tanh-sinh (double exponential) quadrature on [a,b].
/// Handles integrable endpoint singularities; converges to near machine
/// precision for smooth integrands. `rel_tol` is the target relative error.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13);

/// Root of a monotone (nonincreasing) function g on [lo,hi] by bisection.
/// Seeks the smallest root when g has a flat zero plateau.
/// Requires g(lo) >= 0 >= g(hi); expands hi by doubling if asked.
double bisect_nonincreasing(const std::function<double(double)>& g, double lo,
                            double hi, double tol, int max_iter = 200);

/// Dense ODE trajectory for a scalar second-order IVP y'' = acc(y, y').
/// Integrates with classic RK4 at fixed internal step, storing knots every
/// `record_dt`; stops at t_end or when y exceeds `blowup`.
struct OdeTrajectory {
  std::vector<double> t, y, yp;
  bool blew_up = false;
  double t_final = 0.0;

  /// Piecewise cubic Hermite evaluation (value).
  double eval(double tt) const;
  double eval_deriv(double tt) const;
};

OdeTrajectory integrate_ivp2(const std::function<double(double, double)>& acc,
                             double y0, double yp0, double t_end,
                             double record_dt = 1e-3, double blowup = 1e8);

}  // namespace bma
