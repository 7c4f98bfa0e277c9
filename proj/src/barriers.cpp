#include "bma/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "bma/operators.hpp"

namespace bma {

VecN BarrierFn::gradient(const VecN& x, double step) const {
  if (grad) return grad(x);
  VecN g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    VecN e = VecN::Zero(x.size());
    e[i] = step;
    g[i] = (value(x + e) - value(x - e)) / (2.0 * step);
  }
  return g;
}

VecN halton_point(int index, int dim) {
  static const int primes[] = {2, 3, 5, 7, 11, 13};
  VecN p(dim);
  for (int d = 0; d < dim; ++d) {
    int b = primes[d];
    double f = 1.0, r = 0.0;
    int i = index + 1;
    while (i > 0) {
      f /= b;
      r += f * (i % b);
      i /= b;
    }
    p[d] = r;
  }
  return p;
}

BarrierDomain BarrierDomain::from_convex2(const ConvexDomain& d) {
  BarrierDomain bd;
  bd.dim = 2;
  bd.diameter = d.diameter();
  bd.max_curvature_radius = d.max_curvature_radius();
  bd.contains = [d](const VecN& x) {
    return d.contains({x[0], x[1]});
  };
  bd.boundary_sample = [d](int i, int N) {
    Vec2 p = d.boundary_point(2.0 * kPi * i / N);
    VecN v(2);
    v << p.x, p.y;
    return v;
  };
  bd.inward_normal = [d](const VecN& x) {
    Vec2 n = d.inward_normal({x[0], x[1]});
    VecN v(2);
    v << n.x, n.y;
    return v;
  };
  double ext = std::max(d.ax, d.ay);
  Vec2 c = d.center;
  bd.interior_sample = [d, c, ext](int i) {
    for (int k = 0;; ++k) {
      VecN h = halton_point(i * 17 + k, 2);
      VecN p(2);
      p << c.x + (2 * h[0] - 1) * ext, c.y + (2 * h[1] - 1) * ext;
      if (d.contains({p[0], p[1]})) return p;
    }
  };
  return bd;
}

BarrierDomain BarrierDomain::ball(const VecN& center, double radius) {
  BarrierDomain bd;
  int n = static_cast<int>(center.size());
  bd.dim = n;
  bd.diameter = 2 * radius;
  bd.max_curvature_radius = radius;
  bd.contains = [center, radius](const VecN& x) {
    return (x - center).norm() < radius;
  };
  bd.boundary_sample = [center, radius, n](int i, int N) {
    if (n == 2) {
      double t = 2.0 * kPi * i / N;
      VecN v(2);
      v << center[0] + radius * std::cos(t), center[1] + radius * std::sin(t);
      return v;
    }
    // Fibonacci sphere
    double golden = kPi * (3.0 - std::sqrt(5.0));
    double z = 1.0 - 2.0 * (i + 0.5) / N;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = golden * i;
    VecN v(3);
    v << center[0] + radius * r * std::cos(th),
        center[1] + radius * r * std::sin(th), center[2] + radius * z;
    return v;
  };
  bd.inward_normal = [center](const VecN& x) {
    VecN d = center - x;
    return VecN(d / d.norm());
  };
  bd.interior_sample = [center, radius, n](int i) {
    for (int k = 0;; ++k) {
      VecN h = halton_point(i * 17 + k, n);
      VecN p(n);
      for (int d = 0; d < n; ++d)
        p[d] = center[d] + (2 * h[d] - 1) * radius;
      if ((p - center).norm() < radius) return p;
    }
  };
  return bd;
}

BarrierFn quadratic_subsolution(double b, const VecN& x0, double offset) {
  if (!(b > 0))
    throw Error(ErrorKind::Domain, "quadratic_subsolution needs b > 0");
  int n = static_cast<int>(x0.size());
  double coef = 0.5 * std::pow(b, 1.0 / n);
  BarrierFn P;
  P.dim = n;
  P.name = "quadratic";
  P.value = [coef, x0, offset](const VecN& x) {
    return coef * (x - x0).squaredNorm() + offset;
  };
  P.grad = [coef, x0](const VecN& x) { return VecN(2.0 * coef * (x - x0)); };
  P.hess = [coef, n](const VecN&) {
    return MatN(2.0 * coef * MatN::Identity(n, n));
  };
  return P;
}

SupportingSphere supporting_sphere(const BarrierDomain& dom,
                                   const BarrierFn& Phi, const VecN& xi,
                                   const SupportingSphereOpts& opts) {
  VecN nu = dom.inward_normal(xi);
  VecN g = Phi.gradient(xi);
  VecN g_tan = g - g.dot(nu) * nu;

  double grad_inf = opts.grad_inf_hint;
  if (grad_inf < 0) {
    grad_inf = g.norm();
    for (int i = 0; i < 64; ++i)
      grad_inf =
          std::max(grad_inf, Phi.gradient(dom.interior_sample(i)).norm());
  }
  double R = dom.max_curvature_radius + grad_inf + 1.0;

  // verification samples: interior + boundary points
  const int n_int = opts.n_samples * 3 / 4;
  const int n_bnd = opts.n_samples - n_int;
  auto sample = [&](int i) {
    return i < n_int ? dom.interior_sample(i)
                     : dom.boundary_sample(i - n_int, n_bnd);
  };

  SupportingSphere out;
  double phi_xi = Phi(xi);
  for (int attempt = 0; attempt <= opts.max_doublings; ++attempt, R *= 2.0) {
    VecN xbar = xi - g_tan + R * nu;
    double rad2 = (xi - xbar).squaredNorm();
    double margin = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (int i = 0; i < opts.n_samples; ++i) {
      VecN x = sample(i);
      if ((x - xi).norm() < opts.exclusion) continue;
      double w = phi_xi + 0.5 * ((x - xbar).squaredNorm() - rad2);
      double gap = Phi(x) - w;
      margin = std::min(margin, gap);
      if (gap <= 0) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.xbar = xbar;
      out.radius = std::sqrt(rad2);
      out.margin = margin;
      BarrierFn w;
      w.dim = dom.dim;
      w.name = "supporting_sphere";
      w.value = [phi_xi, xbar, rad2](const VecN& x) {
        return phi_xi + 0.5 * ((x - xbar).squaredNorm() - rad2);
      };
      w.grad = [xbar](const VecN& x) { return VecN(x - xbar); };
      int n = dom.dim;
      w.hess = [n](const VecN&) { return MatN(MatN::Identity(n, n)); };
      out.w = std::move(w);
      return out;
    }
  }
  throw Error(ErrorKind::BarrierFailure,
              "supporting_sphere: radius cap reached without verification");
}

ConvexExtension convex_extension(const BarrierDomain& omega,
                                 const BarrierFn& v, double b, int n_xi,
                                 double det_tol, bool skip_precheck,
                                 double precheck_step) {
  const int n = omega.dim;
  const double s = std::pow(b, -1.0 / n);

  BarrierFn Phi;
  Phi.dim = n;
  Phi.value = [s, &v](const VecN& x) { return s * v.value(x); };
  if (v.grad) {
    auto vg = v.grad;
    Phi.grad = [s, vg](const VecN& x) { return VecN(s * vg(x)); };
  }

  if (!skip_precheck) {
    // sampled certificate: v convex with det(D^2 v) >= b inside Omega
    for (int i = 0; i < 200; ++i) {
      VecN x = omega.interior_sample(i);
      double margin = (1.0 - std::sqrt((x - omega.interior_sample(0)).norm() /
                                       std::max(omega.diameter, 1e-9)));
      (void)margin;
      double d = fd_hessian_det(v.value, x, precheck_step);
      if (d < b - det_tol * std::max(1.0, b))
        throw Error(ErrorKind::BarrierFailure,
                    "convex_extension: det(D^2 v) < b at a sample point");
    }
  }

  ConvexExtension ext;
  ext.b = b;
  double grad_hint = -1.0;
  for (int i = 0; i < n_xi; ++i) {
    VecN xi = omega.boundary_sample(i, n_xi);
    SupportingSphereOpts so;
    so.n_samples = 2000;
    so.grad_inf_hint = grad_hint;
    SupportingSphere ss = supporting_sphere(omega, Phi, xi, so);
    if (grad_hint < 0)
      grad_hint = (ss.xbar - xi).norm() + 1.0;  // reuse scale across xi
    ext.xis.push_back(xi);
    ext.xbars.push_back(ss.xbar);
    ext.phi_xi.push_back(Phi(xi));
  }

  const double bpow = std::pow(b, 1.0 / n);
  auto contains = omega.contains;
  auto xis = ext.xis;
  auto xbars = ext.xbars;
  auto phis = ext.phi_xi;
  auto vval = v.value;
  auto sup_branch = [xis, xbars, phis, bpow](const VecN& x, int& arg) {
    double best = -std::numeric_limits<double>::infinity();
    arg = 0;
    for (size_t i = 0; i < xis.size(); ++i) {
      double w = phis[i] + 0.5 * ((x - xbars[i]).squaredNorm() -
                                  (xis[i] - xbars[i]).squaredNorm());
      if (bpow * w > best) {
        best = bpow * w;
        arg = static_cast<int>(i);
      }
    }
    return best;
  };

  BarrierFn V;
  V.dim = n;
  V.name = "convex_extension";
  V.value = [contains, vval, sup_branch](const VecN& x) {
    if (contains(x)) return vval(x);
    int arg;
    return sup_branch(x, arg);
  };
  auto vgrad = v.grad;
  V.grad = [contains, vgrad, vval, sup_branch, xbars, bpow](const VecN& x) {
    if (contains(x)) {
      if (vgrad) return vgrad(x);
      // fall back to central differences of v
      VecN g(x.size());
      double h = 1e-6;
      for (int i = 0; i < x.size(); ++i) {
        VecN e = VecN::Zero(x.size());
        e[i] = h;
        g[i] = (vval(x + e) - vval(x - e)) / (2 * h);
      }
      return g;
    }
    int arg;
    sup_branch(x, arg);
    return VecN(bpow * (x - xbars[static_cast<size_t>(arg)]));
  };
  ext.V = std::move(V);
  return ext;
}

double ConvexExtension::beta_on(const BarrierDomain& outer,
                                int n_samples) const {
  double beta = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i)
    beta = std::max(beta, V.value(outer.boundary_sample(i, n_samples)));
  return beta;
}

RadialProfile::RadialProfile(std::function<double(double)> g, double lower,
                             double upper, double base, double dknot)
    : g_(std::move(g)), lower_(lower), base_(base) {
  knot_r_.push_back(lower);
  knot_w_.push_back(base);
  double acc = base;
  for (double r = lower + dknot; r < upper + dknot; r += dknot) {
    acc += integrate(g_, r - dknot, r, 1e-14);
    knot_r_.push_back(r);
    knot_w_.push_back(acc);
  }
}

double RadialProfile::eval(double rho) const {
  if (rho == lower_) return base_;
  if (rho < lower_)  // the cumulative integral runs negative below the anchor
    return base_ - integrate(g_, rho, lower_, 1e-14);
  size_t k = static_cast<size_t>((rho - lower_) / (knot_r_[1] - knot_r_[0]));
  if (k >= knot_r_.size()) k = knot_r_.size() - 1;
  // integrate the remainder from the nearest knot below
  while (k > 0 && knot_r_[k] > rho) --k;
  return knot_w_[k] + integrate(g_, knot_r_[k], rho, 1e-14);
}

namespace {

struct QuadForm {
  MatN A;
  VecN b;
  MatN Asqrt;

  static QuadForm make(const MatN& A, const VecN& b) {
    if (std::abs(A.determinant() - 1.0) > 1e-9)
      throw Error(ErrorKind::Domain, "quadratic form must have det(A) = 1");
    Eigen::SelfAdjointEigenSolver<MatN> es(A);
    if (es.eigenvalues().minCoeff() <= 0)
      throw Error(ErrorKind::Domain, "quadratic form must be positive definite");
    QuadForm q;
    q.A = A;
    q.b = b;
    q.Asqrt = es.operatorSqrt();
    return q;
  }
  double rho(const VecN& x) const { return (Asqrt * x + Asqrt.inverse() * b).norm(); }
  VecN rho_grad_num(const VecN& x) const { return VecN(A * x + b); }  // = rho * grad(rho)
};

// D^2 [ W(rho(x)) ] for rho(x) = |A^{1/2}x + A^{-1/2}b|
MatN radial_hessian(const QuadForm& q, double rho, const VecN& g,
                    double Wp, double Wpp) {
  // g = A x + b = rho * grad(rho)
  MatN t1 = (q.A - g * g.transpose() / (rho * rho)) * (Wp / rho);
  MatN t2 = (g * g.transpose()) * (Wpp / (rho * rho));
  return t1 + t2;
}

}  // namespace

BarrierFn radial_family(int n, double a, const MatN& A, const VecN& b,
                        double R2, double base) {
  if (!(a > 0) || !(R2 > 0))
    throw Error(ErrorKind::Domain, "radial_family needs a > 0, R2 > 0");
  QuadForm q = QuadForm::make(A, b);
  auto integrand = [n, a](double s) {
    return std::pow(std::pow(s, n) + a, 1.0 / n);
  };
  auto prof = std::make_shared<RadialProfile>(integrand, 2.0 * R2, 200.0 * R2,
                                              base);
  auto qf = std::make_shared<QuadForm>(q);
  BarrierFn w;
  w.dim = n;
  w.name = "radial_family";
  w.value = [prof, qf, base, integrand](const VecN& x) {
    double r = qf->rho(x);
    if (r > 1e6)  // beyond the cached range: direct quadrature from far knot
      return prof->eval(1e6) + integrate(integrand, 1e6, r, 1e-13);
    return prof->eval(r);
  };
  w.grad = [prof, qf, n, a](const VecN& x) {
    double r = qf->rho(x);
    if (r == 0) throw Error(ErrorKind::Domain, "radial_family: rho = 0");
    double Wp = std::pow(std::pow(r, n) + a, 1.0 / n);
    return VecN((Wp / r) * (qf->A * x + qf->b));
  };
  w.hess = [qf, n, a](const VecN& x) {
    double r = qf->rho(x);
    if (r == 0) throw Error(ErrorKind::Domain, "radial_family: rho = 0");
    double rn = std::pow(r, n);
    double Wp = std::pow(rn + a, 1.0 / n);
    double Wpp = std::pow(rn + a, 1.0 / n - 1.0) * std::pow(r, n - 1);
    return radial_hessian(*qf, r, VecN(qf->A * x + qf->b), Wp, Wpp);
  };
  return w;
}

namespace {

// int_L^inf [ (s^n + a)^{1/n} - s ] ds via 3-term binomial tail,
// valid when |a| / L^n is small.
double tail_integral(int n, double a, double L) {
  double inv = 1.0 / n;
  double c1 = inv;
  double c2 = inv * (inv - 1.0) / 2.0;
  double c3 = inv * (inv - 1.0) * (inv - 2.0) / 6.0;
  double Ln = std::pow(L, n);
  double t1 = c1 * a * std::pow(L, 2.0 - n) / (n - 2.0);
  double t2 = c2 * a * a * std::pow(L, 2.0 - 2.0 * n) / (2.0 * n - 2.0);
  double t3 = c3 * a * a * a * std::pow(L, 2.0 - 3.0 * n) / (3.0 * n - 2.0);
  (void)Ln;
  return t1 + t2 + t3;
}

double offset_integral(int n, double a, double lower) {
  // int_lower^inf [ (s^n+a)^{1/n} - s ] ds, stable via expm1/log1p
  auto integrand = [n, a](double s) {
    return s * std::expm1(std::log1p(a / std::pow(s, n)) / n);
  };
  double L = std::max({4.0 * lower, 10.0,
                       std::pow(std::abs(a) * 1e8, 1.0 / n)});
  return integrate(integrand, lower, L, 1e-13) + tail_integral(n, a, L);
}

}  // namespace

double mu_offset(int n, double a, double R2, double base) {
  if (n < 3)
    throw Error(ErrorKind::UnsupportedDimension,
                "mu_offset needs n >= 3 (divergent tail otherwise)");
  return base - 2.0 * R2 * R2 + offset_integral(n, a, 2.0 * R2);
}

BarrierFn exterior_supersolution(int n, double R4, const MatN& A,
                                 const VecN& b) {
  if (!(R4 > 0)) throw Error(ErrorKind::Domain, "exterior needs R4 > 0");
  QuadForm q = QuadForm::make(A, b);
  double R4n = std::pow(R4, n);
  auto integrand = [n, R4n](double s) {
    return std::pow(std::max(std::pow(s, n) - R4n, 0.0), 1.0 / n);
  };
  auto prof =
      std::make_shared<RadialProfile>(integrand, R4, 200.0 * R4, 0.0);
  auto qf = std::make_shared<QuadForm>(q);
  BarrierFn w;
  w.dim = n;
  w.name = "exterior_supersolution";
  w.value = [prof, qf, R4](const VecN& x) {
    double r = qf->rho(x);
    return r <= R4 ? 0.0 : prof->eval(r);
  };
  w.grad = [qf, n, R4, R4n](const VecN& x) {
    double r = qf->rho(x);
    if (r <= R4) return VecN(VecN::Zero(x.size()));
    double Wp = std::pow(std::pow(r, n) - R4n, 1.0 / n);
    return VecN((Wp / r) * (qf->A * x + qf->b));
  };
  w.hess = [qf, n, R4, R4n](const VecN& x) {
    double r = qf->rho(x);
    int dim = static_cast<int>(x.size());
    if (r <= R4) return MatN(MatN::Zero(dim, dim));
    double rn = std::pow(r, n);
    double Wp = std::pow(rn - R4n, 1.0 / n);
    double Wpp = std::pow(rn - R4n, 1.0 / n - 1.0) * std::pow(r, n - 1);
    return radial_hessian(*qf, r, VecN(qf->A * x + qf->b), Wp, Wpp);
  };
  return w;
}

double exterior_offset(int n, double R4) {
  if (n < 3)
    throw Error(ErrorKind::UnsupportedDimension, "exterior offset needs n >= 3");
  return -0.5 * R4 * R4 + offset_integral(n, -std::pow(R4, n), R4);
}

OffsetTable OffsetTable::build(int n, const MatN& A, const VecN& b, double c,
                               double R2, double base,
                               const std::vector<double>& a_grid) {
  OffsetTable t;
  t.n = n;
  t.A = A;
  t.b = b;
  t.c = c;
  t.R2 = R2;
  t.base = base;
  t.a_grid = a_grid;
  for (double a : a_grid) t.mu.push_back(mu_offset(n, a, R2, base));
  for (size_t i = 1; i < t.mu.size(); ++i)
    if (t.mu[i] <= t.mu[i - 1])
      throw Error(ErrorKind::BarrierFailure, "offset table is not increasing");
  return t;
}

double match_offsets(const OffsetTable& table_m, const OffsetTable& table_1,
                     double a) {
  if (a < table_1.a_grid.front() || a > table_1.a_grid.back())
    throw Error(ErrorKind::Range, "match_offsets: a outside table range");
  double target = mu_offset(table_1.n, a, table_1.R2, table_1.base);
  if (target < table_m.mu.front() || target > table_m.mu.back())
    throw Error(ErrorKind::Range, "match_offsets: target outside table range");
  double lo = table_m.a_grid.front(), hi = table_m.a_grid.back();
  auto g = [&](double am) {
    return target - mu_offset(table_m.n, am, table_m.R2, table_m.base);
  };  // decreasing in am
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  double am = 0.5 * (lo + hi);
  double res = std::abs(mu_offset(table_m.n, am, table_m.R2, table_m.base) -
                        target);
  if (res > 1e-8)
    throw Error(ErrorKind::Range, "match_offsets: residual " +
                                      std::to_string(res));
  return am;
}

OdeTrajectory pogorelov_profile(double f0, double t_end) {
  if (!(f0 > 0))
    throw Error(ErrorKind::Domain, "pogorelov profile needs f0 > 0");
  auto acc = [](double f, double fp) {
    return 27.0 / (16.0 * f * f) + 4.0 * fp * fp / f;
  };
  OdeTrajectory tr = integrate_ivp2(acc, f0, 0.0, t_end, 1e-3, 1e7);
  if (tr.blew_up && tr.t_final <= 1.5)
    throw Error(ErrorKind::BarrierFailure,
                "pogorelov profile blows up inside |x1| < 3/2 (f0 too small)");
  for (double f : tr.y)
    if (!(f > 0))
      throw Error(ErrorKind::BarrierFailure, "pogorelov profile lost positivity");
  return tr;
}

double pogorelov_default_f0() {
  auto acc = [](double f, double fp) {
    return 27.0 / (16.0 * f * f) + 4.0 * fp * fp / f;
  };
  OdeTrajectory tr = integrate_ivp2(acc, 1.0, 0.0, 6.0, 1e-3, 1e9);
  // scaling f_tau(t) = tau^{2/3} f(t/tau) moves the blow-up to tau * t*
  double tstar = tr.t_final;
  return std::pow(2.0 / tstar, 2.0 / 3.0);
}

BarrierFn pogorelov(const VecN& e, double f0) {
  if (e.size() != 3)
    throw Error(ErrorKind::UnsupportedDimension, "pogorelov is 3-d");
  if (std::abs(e.norm() - 1.0) > 1e-12 || std::abs(e[2]) > 1e-12)
    throw Error(ErrorKind::Domain,
                "pogorelov axis must be a unit vector in the x1x2-plane");
  auto prof = std::make_shared<OdeTrajectory>(pogorelov_profile(f0));
  VecN axis = e;
  BarrierFn P;
  P.dim = 3;
  P.name = "pogorelov";
  P.value = [prof, axis](const VecN& x) {
    double t = x.dot(axis);
    VecN perp = x - t * axis;
    return prof->eval(std::abs(t)) * std::pow(perp.squaredNorm(), 2.0 / 3.0);
  };
  P.grad = [prof, axis](const VecN& x) {
    double t = x.dot(axis);
    VecN perp = x - t * axis;
    double rho2 = perp.squaredNorm();
    double f = prof->eval(std::abs(t));
    double fp = prof->eval_deriv(std::abs(t)) * (t >= 0 ? 1.0 : -1.0);
    if (rho2 == 0) return VecN(VecN::Zero(3));
    return VecN(fp * std::pow(rho2, 2.0 / 3.0) * axis +
                f * (4.0 / 3.0) * std::pow(rho2, 2.0 / 3.0 - 1.0) * perp);
  };

  // mandatory pre-acceptance validation against the FD oracle
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    VecN h = halton_point(i, 3);
    VecN x(3);
    x << 1.4 * (2 * h[0] - 1), 1.4 * (2 * h[1] - 1), 1.4 * (2 * h[2] - 1);
    if (x.norm() > 1.45) continue;
    double t = x.dot(axis);
    if ((x - t * axis).norm() < 0.1) continue;
    double d = fd_hessian_det_rich(P.value, x, 2e-3);
    worst = std::max(worst, std::abs(d - 1.0));
    if (std::abs(d - 1.0) > 1e-3) ++bad;
  }
  if (bad > 0)
    throw Error(ErrorKind::BarrierFailure,
                "pogorelov: FD determinant validation failed (worst dev " +
                    std::to_string(worst) + ")");
  return P;
}

BarrierFn mercedes_barrier(const VecN& e1, const VecN& e2, const VecN& e3,
                           double f0) {
  if (e1.dot(e2) <= -1 + 1e-14 || e2.dot(e3) <= -1 + 1e-14 ||
      e3.dot(e1) <= -1 + 1e-14)
    throw Error(ErrorKind::Domain,
                "mercedes_barrier: vectors must satisfy pairwise dot > -1");
  auto P1 = std::make_shared<BarrierFn>(pogorelov(e1, f0));
  auto P2 = std::make_shared<BarrierFn>(pogorelov(e2, f0));
  auto P3 = std::make_shared<BarrierFn>(pogorelov(e3, f0));
  std::vector<VecN> es{e1, e2, e3};
  std::vector<std::shared_ptr<BarrierFn>> Ps{P1, P2, P3};

  auto branch = [es, Ps](const VecN& x, int& arg) {
    double best = -std::numeric_limits<double>::infinity();
    arg = 0;
    for (int j = 0; j < 3; ++j) {
      double v = x.dot(es[static_cast<size_t>(j)]) +
                 Ps[static_cast<size_t>(j)]->value(x);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    return best;
  };

  BarrierFn h0;
  h0.dim = 3;
  h0.name = "mercedes";
  h0.value = [branch](const VecN& x) {
    int arg;
    return branch(x, arg);
  };
  h0.grad = [branch, es, Ps](const VecN& x) {
    int arg;
    branch(x, arg);
    return VecN(es[static_cast<size_t>(arg)] +
                Ps[static_cast<size_t>(arg)]->grad(x));
  };
  return h0;
}

CuspBarrier cusp_barrier(const BarrierFn& Phi,
                         const std::function<VecN(int)>& cut_samples,
                         int n_samples,
                         const std::function<VecN(const VecN&, int)>& Tpow) {
  const int n = Phi.dim;
  const double h = 1e-6;
  double deficit = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    VecN x = cut_samples(i);
    for (int m = -2; m <= 2; ++m) {
      for (int sgn : {-1, +1}) {
        VecN xp = x;
        xp[n - 1] = sgn * h;
        double slope =
            (Phi.value(Tpow(xp, m)) - Phi.value(Tpow(x, m))) / h;
        deficit = std::max(deficit, -slope);
      }
    }
  }
  double K = 2.0 * deficit + 1.0;

  auto pv = Phi.value;
  auto pg = Phi.grad;
  CuspBarrier cb;
  cb.K = K;
  cb.phi_tilde.dim = n;
  cb.phi_tilde.name = "cusp";
  cb.phi_tilde.value = [pv, K, n](const VecN& x) {
    return pv(x) + K * std::abs(x[n - 1]);
  };
  if (pg)
    cb.phi_tilde.grad = [pg, K, n](const VecN& x) {
      VecN g = pg(x);
      g[n - 1] += K * (x[n - 1] >= 0 ? 1.0 : -1.0);
      return g;
    };

  // verify the one-sided slope conditions for the assembled barrier
  double min_slope = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    VecN x = cut_samples(i);
    for (int m = -2; m <= 2; ++m)
      for (int sgn : {-1, +1}) {
        VecN xp = x;
        xp[n - 1] = sgn * h;
        double slope = (cb.phi_tilde.value(Tpow(xp, m)) -
                        cb.phi_tilde.value(Tpow(x, m))) /
                       h;
        min_slope = std::min(min_slope, slope);
      }
  }
  cb.min_one_sided_slope = min_slope;
  if (min_slope <= 0)
    throw Error(ErrorKind::BarrierFailure,
                "cusp barrier: one-sided slope condition failed");
  return cb;
}

GradientCheckReport gradient_check(const BarrierFn& f,
                                   const std::function<VecN(int)>& sample,
                                   int n, double step, double rel_tol) {
  GradientCheckReport rep;
  for (int i = 0; i < n; ++i) {
    VecN x = sample(i);
    VecN g = f.gradient(x);
    VecN gfd(x.size());
    for (int d = 0; d < x.size(); ++d) {
      VecN e = VecN::Zero(x.size());
      e[d] = step;
      gfd[d] = (f.value(x + e) - f.value(x - e)) / (2 * step);
    }
    double scale = std::max(1.0, g.norm());
    double rel = (g - gfd).norm() / scale;
    rep.worst_rel_err = std::max(rep.worst_rel_err, rel);
  }
  rep.passed = rep.worst_rel_err <= rel_tol;
  return rep;
}

}  // namespace bma
