#include "pcurl/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace pcurl {

EnergyEval energy_J(const Discretization& d, const Vec& u, const Exponents& e, double eps) {
  const double p = e.p(), ps = e.p_star();
  Vec cu;
  d.curl(u, cu);
  EnergyEval ev;
  const double e2 = eps * eps;
  double a = integral_pow(d.curl_quad(), cu, p, e2);
  if (eps > 0.0) {
    double wsum = 0.0;
    for (double w : d.curl_quad().weights()) wsum += w;
    a -= wsum * std::pow(eps, p);
  }
  ev.curl_term = a / p;
  ev.pstar_term = integral_pow(d.quad(), u, ps) / ps;
  ev.J = ev.curl_term - ev.pstar_term;
  return ev;
}

Vec grad_J_covector(const Discretization& d, const Vec& u, const Exponents& e, double eps) {
  const double p = e.p(), ps = e.p_star();
  const double e2 = eps * eps;
  Vec cu, s, coef, pb, out;
  d.curl(u, cu);
  const CellQuadrature& cq = d.curl_quad();
  cq.pair(cu, cu, s);
  const Vec& Wc = cq.weights();
  coef.resize(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) {
    const double x = s[c] + e2;
    coef[c] = x > 0.0 ? Wc[c] * std::pow(x, 0.5 * p - 1.0) : 0.0;
  }
  cq.pullback(coef, cu, pb);
  d.curl_transpose(pb, out);

  const CellQuadrature& q = d.quad();
  q.pair(u, u, s);
  const Vec& W = q.weights();
  coef.resize(s.size());
  for (std::size_t c = 0; c < s.size(); ++c)
    coef[c] = s[c] > 0.0 ? W[c] * std::pow(s[c], 0.5 * ps - 1.0) : 0.0;
  q.pullback(coef, u, pb);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= pb[k];
  return out;
}

Vec grad_J(const Discretization& d, const Vec& u, const Exponents& e, double eps) {
  Vec g = grad_J_covector(d, u, e, eps);
  const Vec& m = d.mass();
  for (std::size_t k = 0; k < g.size(); ++k) g[k] /= m[k];
  return g;
}

QuotientEval quotient_Q(const Discretization& d, const Vec& v, const Exponents& e,
                        const WvOptions& opts, const Vec* w_init) {
  const double p = e.p(), ps = e.p_star();
  QuotientEval q;
  Vec cu;
  d.curl(v, cu);
  q.A = integral_pow(d.curl_quad(), cu, p);
  if (q.A == 0.0) throw std::domain_error("kernel field");
  WvResult wv = w_of_v(d, v, e, opts, w_init);
  q.w = std::move(wv.w);
  q.report = wv.report;
  Vec ut(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) ut[k] = v[k] + q.w[k];
  q.B = integral_pow(d.quad(), ut, ps);
  q.Q = q.A / std::pow(q.B, p / ps);
  return q;
}

EnergyEval energy_J(const VectorField3& u, const Exponents& e, double eps) {
  require_finite(u, "energy_J");
  PeriodicDisc d(u.spec);
  return energy_J(d, u.flat(), e, eps);
}

VectorField3 grad_J(const VectorField3& u, const Exponents& e, double eps) {
  require_finite(u, "grad_J");
  PeriodicDisc d(u.spec);
  return VectorField3::from_flat(u.spec, grad_J(d, u.flat(), e, eps));
}

double quotient_Q(const VectorField3& v, const Exponents& e, const WvOptions& opts) {
  require_finite(v, "quotient_Q");
  PeriodicDisc d(v.spec);
  return quotient_Q(d, v.flat(), e, opts).Q;
}

double pde_residual(const VectorField3& u, const Exponents& e, DiffMode mode) {
  require_finite(u, "pde_residual");
  const double p = e.p(), ps = e.p_star();
  SpectralWorkspace* wsp = nullptr;
  std::unique_ptr<SpectralWorkspace> ws;
  if (mode == DiffMode::spectral) {
    ws = std::make_unique<SpectralWorkspace>(u.spec);
    wsp = ws.get();
  }
  VectorField3 c = curl(u, mode, wsp);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 x = c.at(i);
    const double m = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double f = m > 0.0 ? std::pow(m, p - 2.0) : 0.0;
    c.set(i, {f * x[0], f * x[1], f * x[2]});
  }
  const VectorField3 lhs = curl(c, mode, wsp);
  const int margin = 2 * stencil_margin(mode);
  const GridSpec& g = u.spec;
  double num = 0.0, den = 0.0;
  for (int k = margin; k < g.n[2] - margin; ++k)
    for (int j = margin; j < g.n[1] - margin; ++j)
      for (int i = margin; i < g.n[0] - margin; ++i) {
        const std::size_t idx = g.index(i, j, k);
        const Vec3 x = u.at(idx);
        const double m = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double f = m > 0.0 ? std::pow(m, ps - 2.0) : 0.0;
        for (int a = 0; a < 3; ++a) {
          const double r = f * x[a];
          num += (lhs.c[a][idx] - r) * (lhs.c[a][idx] - r);
          den += r * r;
        }
      }
  if (den == 0.0) throw std::domain_error("pde_residual: zero right-hand side");
  return std::sqrt(num / den);
}

}  // namespace pcurl
