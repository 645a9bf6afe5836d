#include "pcurl/constraint.hpp"

#include <cmath>
#include <stdexcept>

namespace pcurl {

namespace {

// Riesz representative of the derivative of (1/q) sum W |u|^q.
void power_density(const Discretization& d, const Vec& u, double q, Vec& s, Vec& coef, Vec& out) {
  const CellQuadrature& quad = d.quad();
  quad.pair(u, u, s);
  const Vec& W = quad.weights();
  coef.resize(s.size());
  const double e = 0.5 * q - 1.0;
  for (std::size_t c = 0; c < s.size(); ++c)
    coef[c] = s[c] > 0.0 ? W[c] * std::pow(s[c], e) : 0.0;
  quad.pullback(coef, u, out);
  const Vec& m = d.mass();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] /= m[k];
}

double relative_dual(const Discretization& d, const Vec& pw, const Vec& u, double ps) {
  const double qd = ps / (ps - 1.0);
  const double num = std::pow(integral_pow(d.quad(), pw, qd), 1.0 / qd);
  const double den = std::pow(integral_pow(d.quad(), u, ps), (ps - 1.0) / ps);
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return num / den;
}

// argmin_a sum_c W_c (s0 + 2 a b + a^2 c)^{q/2}; convex in a.
double exact_line_search(const Vec& W, const Vec& s0, const Vec& b, const Vec& cc, double q) {
  const double h = 0.5 * q;
  auto eval = [&](double a, double& f, double& f1, double& f2) {
    f = f1 = f2 = 0.0;
    for (std::size_t c = 0; c < W.size(); ++c) {
      double sa = s0[c] + a * (2.0 * b[c] + a * cc[c]);
      if (sa <= 0.0) continue;
      const double pw = std::pow(sa, h - 1.0);
      const double ds = 2.0 * (b[c] + a * cc[c]);
      f += W[c] * sa * pw;
      f1 += W[c] * h * pw * ds;
      f2 += W[c] * (h * (h - 1.0) * pw / sa * ds * ds + 2.0 * h * pw * cc[c]);
    }
  };
  // f is convex: bracketed Newton on f' = 0.
  double f, f1, f2;
  eval(0.0, f, f1, f2);
  if (f1 == 0.0) return 0.0;
  const double sgn = f1 < 0.0 ? 1.0 : -1.0;
  auto d1 = [&](double a, double& dd2) {
    double ff, g1, g2;
    eval(sgn * a, ff, g1, g2);
    dd2 = g2;
    return sgn * g1;
  };
  double lo = 0.0, hi = f2 > 0.0 ? -sgn * f1 / f2 : 1.0, h2;
  if (!(hi > 0.0)) hi = 1.0;
  double dh = d1(hi, h2);
  for (int k = 0; dh < 0.0 && k < 200; ++k) {
    lo = hi;
    hi *= 2.0;
    dh = d1(hi, h2);
  }
  if (dh < 0.0) return sgn * hi;
  double a = hi, da = dh, a2 = h2;
  for (int it = 0; it < 100; ++it) {
    if (da == 0.0) break;
    if (da > 0.0)
      hi = a;
    else
      lo = a;
    double next = a2 > 0.0 ? a - da / a2 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * hi) break;
    if (std::abs(next - a) <= 1e-13 * a) {
      a = next;
      break;
    }
    a = next;
    da = d1(a, a2);
  }
  return sgn * a;
}

}  // namespace

WvResult w_of_v(const Discretization& d, const Vec& v, const Exponents& e, const WvOptions& opts,
                const Vec* w_init) {
  const double ps = e.p_star();
  const std::size_t n = d.dofs();
  if (v.size() != n) throw std::invalid_argument("w_of_v: size mismatch");
  for (double x : v)
    if (!std::isfinite(x)) throw std::domain_error("w_of_v: non-finite input");

  WvResult res;
  if (w_init) {
    res.w = *w_init;
  } else {
    res.w = v;
    d.project_W(res.w);
    for (double& x : res.w) x = -x;
  }
  Vec ut(n);
  for (std::size_t k = 0; k < n; ++k) ut[k] = v[k] + res.w[k];

  Vec s, coef, F, rw, g, g_old, F_old, dir(n, 0.0), b, cc;
  const Vec& W = d.quad().weights();
  const Vec& m = d.mass();
  bool newton = opts.precond;
  int it = 0;
  for (;; ++it) {
    power_density(d, ut, ps, s, coef, F);
    rw = F;
    d.project_W(rw);
    res.report.m_residual = relative_dual(d, rw, ut, ps);
    if (res.report.m_residual < opts.tol) {
      res.report.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    if (newton) {
      g = F;
      newton = d.newton_project_W(ut, ps, g);
    }
    if (!newton) {
      g = F;
      if (opts.precond)
        d.project_W(g);
      else
        d.grad_div(g);
    }
    double beta = 0.0;
    if (it > 0) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        num += m[k] * F[k] * (g[k] - g_old[k]);
        den += m[k] * F_old[k] * g_old[k];
      }
      if (den > 0.0) beta = std::max(0.0, num / den);
    }
    for (std::size_t k = 0; k < n; ++k) dir[k] = -g[k] + beta * dir[k];
    if (mass_inner(d, dir, F) >= 0.0)
      for (std::size_t k = 0; k < n; ++k) dir[k] = -g[k];
    g_old = g;
    F_old = F;

    d.quad().pair(ut, dir, b);
    d.quad().pair(dir, dir, cc);
    const double a = exact_line_search(W, s, b, cc, ps);
    if (a == 0.0) break;
    for (std::size_t k = 0; k < n; ++k) {
      ut[k] += a * dir[k];
      res.w[k] += a * dir[k];
    }
  }
  res.report.iterations = it;
  return res;
}

double m_residual(const Discretization& d, const Vec& u, const Exponents& e) {
  Vec s, coef, F;
  power_density(d, u, e.p_star(), s, coef, F);
  d.project_W(F);
  return relative_dual(d, F, u, e.p_star());
}

double nehari_defect(double A, double B) {
  const double m = std::max(A, B);
  return m > 0.0 ? std::abs(A - B) / m : 0.0;
}

NehariResult nehari_scale(const Discretization& d, const Vec& u, const Exponents& e,
                          const WvOptions& opts, const Vec* w_init) {
  const double p = e.p(), ps = e.p_star();
  NehariResult r;
  WvResult wv = w_of_v(d, u, e, opts, w_init);
  r.w = std::move(wv.w);
  r.report = wv.report;
  Vec ut(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) ut[k] = u[k] + r.w[k];
  Vec cu;
  d.curl(ut, cu);
  const double A = integral_pow(d.curl_quad(), cu, p);
  const double B = integral_pow(d.quad(), ut, ps);
  if (A == 0.0) throw std::domain_error("kernel field");
  if (B == 0.0) throw std::domain_error("nehari_scale: zero field");
  r.t = std::pow(A / B, 1.0 / (ps - p));
  r.scaled = ut;
  for (double& x : r.scaled) x *= r.t;
  d.curl(r.scaled, cu);
  r.A = integral_pow(d.curl_quad(), cu, p);
  r.B = integral_pow(d.quad(), r.scaled, ps);
  r.report.nehari_defect = nehari_defect(r.A, r.B);
  return r;
}

double monotone_gap(const Vec3& a, const Vec3& b, double q) {
  if (!(q > 1.0)) throw std::invalid_argument("monotone_gap: q must exceed 1");
  auto nrm = [](const Vec3& x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); };
  const double na = nrm(a), nb = nrm(b);
  const double fa = na > 0.0 ? std::pow(na, q - 2.0) : 0.0;
  const double fb = nb > 0.0 ? std::pow(nb, q - 2.0) : 0.0;
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += (fa * a[i] - fb * b[i]) * (a[i] - b[i]);
  return s;
}

FieldWvResult w_of_v(const VectorField3& v, const Exponents& e, const WvOptions& opts,
                     const VectorField3* w_init) {
  require_finite(v, "w_of_v");
  PeriodicDisc d(v.spec);
  Vec wi;
  if (w_init) wi = w_init->flat();
  WvResult r = w_of_v(d, v.flat(), e, opts, w_init ? &wi : nullptr);
  return {VectorField3::from_flat(v.spec, r.w), r.report};
}

double m_residual(const VectorField3& u, const Exponents& e) {
  require_finite(u, "m_residual");
  PeriodicDisc d(u.spec);
  return m_residual(d, u.flat(), e);
}

FieldNehariResult nehari_scale(const VectorField3& u, const Exponents& e, const WvOptions& opts) {
  require_finite(u, "nehari_scale");
  PeriodicDisc d(u.spec);
  NehariResult r = nehari_scale(d, u.flat(), e, opts);
  return {r.t, VectorField3::from_flat(u.spec, r.scaled), r.report};
}

}  // namespace pcurl
