#include "bma/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "bma/common.hpp"

namespace bma {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  // Node pair at parameter t > 0: x = tanh(pi/2 sinh t). The distance to
  // the endpoints 1 -|x| is computed stably so integrable endpoint
  // singularities keep their nodes down to denormal range.
  auto pair_contrib = [&](double t) {
    double s = std::sinh(t);
    double c = std::cosh(t);
    double u = 0.5 * kPi * s;
    double em = std::exp(-2.0 * u);
    double omx = 2.0 * em / (1.0 + em);            // 1 - tanh(u)
    if (omx == 0.0 || half * omx == 0.0) return 0.0;
    double w = 0.5 * kPi * c * 4.0 * em / ((1.0 + em) * (1.0 + em));
    return w * (f(b - half * omx) + f(a + half * omx));
  };

  const double t_max = 6.5;
  double h = 1.0;
  double sum = 0.5 * kPi * f(mid);  // t = 0 node: x = 0, weight pi/2
  for (double t = h; t <= t_max; t += h) sum += pair_contrib(t);
  double integral = sum * h;

  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= t_max; t += 2.0 * h) add += pair_contrib(t);
    double next = 0.5 * integral + add * h;
    double err = std::abs(next - integral);
    integral = next;
    if (level >= 4 && err <= rel_tol * std::max(std::abs(integral), 1e-300))
      break;
  }
  return sign * half * integral;
}

double bisect_nonincreasing(const std::function<double(double)>& g, double lo,
                            double hi, double tol, int max_iter) {
  double glo = g(lo);
  if (glo < 0) return lo;
  double ghi = g(hi);
  int expand = 0;
  while (ghi > 0 && expand++ < 80) {
    double w = hi - lo;
    lo = hi;
    hi += 2.0 * std::max(w, 1.0);
    ghi = g(hi);
  }
  if (ghi > 0) throw Error(ErrorKind::Diverged, "bisection: no sign change");
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double gm = g(mid);
    if (gm > 0)
      lo = mid;
    else
      hi = mid;  // gm <= 0: keep the smallest root on a flat plateau
  }
  return 0.5 * (lo + hi);
}

OdeTrajectory integrate_ivp2(const std::function<double(double, double)>& acc,
                             double y0, double yp0, double t_end,
                             double record_dt, double blowup) {
  OdeTrajectory tr;
  tr.t.push_back(0.0);
  tr.y.push_back(y0);
  tr.yp.push_back(yp0);

  double t = 0.0, y = y0, yp = yp0;
  double next_record = record_dt;
  long steps = 0;
  while (t < t_end) {
    // step tracks relative rates so finite-time blow-up is reached in
    // O(log) steps rather than stalling
    double a0 = acc(y, yp);
    double scale = std::max(std::abs(y), 1.0);
    double rate = std::max(std::abs(yp) / scale,
                           std::abs(a0) / std::max(std::abs(yp), 0.1 * scale));
    double dt = std::min(record_dt, 0.02 / std::max(rate, 1e-12));
    dt = std::min(dt, t_end - t);
    if (dt < 1e-15 * std::max(1.0, t) || ++steps > 10'000'000) {
      tr.blew_up = true;
      break;
    }
    double k1y = yp, k1p = a0;
    double k2y = yp + 0.5 * dt * k1p, k2p = acc(y + 0.5 * dt * k1y, yp + 0.5 * dt * k1p);
    double k3y = yp + 0.5 * dt * k2p, k3p = acc(y + 0.5 * dt * k2y, yp + 0.5 * dt * k2p);
    double k4y = yp + dt * k3p, k4p = acc(y + dt * k3y, yp + dt * k3p);
    y += dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    yp += dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    t += dt;
    if (!std::isfinite(y) || std::abs(y) > blowup) {
      tr.blew_up = true;
      break;
    }
    if (t >= next_record - 1e-15 || t >= t_end) {
      tr.t.push_back(t);
      tr.y.push_back(y);
      tr.yp.push_back(yp);
      next_record += record_dt;
    }
  }
  tr.t_final = tr.t.back();
  return tr;
}

double OdeTrajectory::eval(double tt) const {
  if (tt <= t.front()) return y.front();
  if (tt >= t.back()) return y.back();
  auto it = std::upper_bound(t.begin(), t.end(), tt);
  size_t i = static_cast<size_t>(it - t.begin()) - 1;
  double h = t[i + 1] - t[i];
  double s = (tt - t[i]) / h;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  return h00 * y[i] + h10 * h * yp[i] + h01 * y[i + 1] + h11 * h * yp[i + 1];
}

double OdeTrajectory::eval_deriv(double tt) const {
  if (tt <= t.front()) return yp.front();
  if (tt >= t.back()) return yp.back();
  auto it = std::upper_bound(t.begin(), t.end(), tt);
  size_t i = static_cast<size_t>(it - t.begin()) - 1;
  double h = t[i + 1] - t[i];
  double s = (tt - t[i]) / h;
  double d00 = 6 * s * (s - 1) / h;
  double d10 = (1 - s) * (1 - 3 * s);
  double d01 = -d00;
  double d11 = s * (3 * s - 2);
  return d00 * y[i] + d10 * yp[i] + d01 * y[i + 1] + d11 * yp[i + 1];
}

}  // namespace bma
