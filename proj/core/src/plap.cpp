#include "pcurl/plap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pcurl/oracles.hpp"

namespace pcurl {

void RadialGrid::validate() const {
  if (n < 8) throw std::invalid_argument("RadialGrid: n >= 8");
  if (!(r_min > 0.0 && R_max > r_min)) throw std::invalid_argument("RadialGrid: need 0 < r_min < R_max");
  if (N < 2) throw std::invalid_argument("RadialGrid: N >= 2");
}

Vec RadialGrid::radii() const {
  validate();
  Vec r(n);
  const double a = std::log(r_min), b = std::log(R_max);
  for (int i = 0; i < n; ++i) r[i] = std::exp(a + (b - a) * i / (n - 1));
  r[n - 1] = R_max;
  return r;
}

namespace {

struct Weights {
  Vec r, dr, V;  // V_i = (r_{i+1}^N - r_i^N) / N
  Vec wstar;     // lumped weights of the p* term per node
  double omega = 0.0;
  double m = 0.0;
  double grad_tail = 0.0;  // m^{p-1} R^{N-p}
  double ps = 0.0;
};

Weights make_weights(const RadialGrid& g, double p) {
  const int N = g.N;
  if (!(p > 1.0 && p < N)) throw std::invalid_argument("plap: need 1 < p < N");
  Weights w;
  w.r = g.radii();
  const int n = g.n;
  w.dr.resize(n - 1);
  w.V.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    w.dr[i] = w.r[i + 1] - w.r[i];
    w.V[i] = (std::pow(w.r[i + 1], N) - std::pow(w.r[i], N)) / N;
  }
  w.omega = 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
  w.m = (N - p) / (p - 1.0);
  w.ps = N * p / (N - p);
  w.grad_tail = std::pow(w.m, p - 1.0) * std::pow(g.R_max, N - p);
  w.wstar.assign(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    w.wstar[i] += 0.5 * w.V[i];
    w.wstar[i + 1] += 0.5 * w.V[i];
  }
  w.wstar[0] += std::pow(w.r[0], N) / N;
  w.wstar[n - 1] += std::pow(g.R_max, N) / (w.m * w.ps - N);
  return w;
}

double sgn_pow(double x, double e) { return x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), e), x); }

RadialEnergy energy(const Weights& w, const Vec& u, double p) {
  RadialEnergy ev;
  const std::size_t n = u.size();
  double A = 0.0, B = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) A += std::pow(std::abs(u[i + 1] - u[i]) / w.dr[i], p) * w.V[i];
  A += w.grad_tail * std::pow(std::abs(u[n - 1]), p);
  for (std::size_t i = 0; i < n; ++i) B += std::pow(std::abs(u[i]), w.ps) * w.wstar[i];
  ev.grad = w.omega * A;
  ev.pstar = w.omega * B;
  ev.J = ev.grad / p - ev.pstar / w.ps;
  ev.quotient = ev.pstar > 0.0 ? ev.grad / std::pow(ev.pstar, p / w.ps) : 0.0;
  return ev;
}

void energy_gradient(const Weights& w, const Vec& u, double p, Vec& dA, Vec& dB) {
  const std::size_t n = u.size();
  dA.assign(n, 0.0);
  dB.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gi = (u[i + 1] - u[i]) / w.dr[i];
    const double f = w.omega * p * sgn_pow(gi, p - 1.0) * w.V[i] / w.dr[i];
    dA[i] -= f;
    dA[i + 1] += f;
  }
  dA[n - 1] += w.omega * p * w.grad_tail * sgn_pow(u[n - 1], p - 1.0);
  for (std::size_t i = 0; i < n; ++i) dB[i] = w.omega * w.ps * sgn_pow(u[i], w.ps - 1.0) * w.wstar[i];
}

// Frozen-coefficient p-Laplacian stiffness, solved by the Thomas algorithm.
class TridiagPrecond {
 public:
  TridiagPrecond(const Weights& w, const Vec& u, double p) {
    const std::size_t n = u.size();
    diag_.assign(n, 0.0);
    off_.assign(n - 1, 0.0);
    double gmax = 0.0;
    Vec g(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      g[i] = std::abs(u[i + 1] - u[i]) / w.dr[i];
      gmax = std::max(gmax, g[i]);
    }
    const double floor = std::max(gmax * 1e-6, 1e-300);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double c = w.omega * p * (p - 1.0) * std::pow(std::max(g[i], floor), p - 2.0) * w.V[i] /
                       (w.dr[i] * w.dr[i]);
      diag_[i] += c;
      diag_[i + 1] += c;
      off_[i] = -c;
    }
    double umax = 0.0;
    for (double x : u) umax = std::max(umax, std::abs(x));
    const double un = std::max(std::abs(u[n - 1]), std::max(umax * 1e-6, 1e-300));
    diag_[n - 1] += w.omega * p * (p - 1.0) * w.grad_tail * std::pow(un, p - 2.0);
    double dmax = 0.0;
    for (double d : diag_) dmax = std::max(dmax, d);
    for (double& d : diag_) d += 1e-12 * dmax;
  }

  void solve(const Vec& rhs, Vec& x) const {
    const std::size_t n = rhs.size();
    Vec c(n), d(n);
    c[0] = off_[0] / diag_[0];
    d[0] = rhs[0] / diag_[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double den = diag_[i] - off_[i - 1] * c[i - 1];
      c[i] = i + 1 < n ? off_[i] / den : 0.0;
      d[i] = (rhs[i] - off_[i - 1] * d[i - 1]) / den;
    }
    x.resize(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  }

  double energy(const Vec& u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += diag_[i] * u[i] * u[i];
    for (std::size_t i = 0; i + 1 < u.size(); ++i) s += 2.0 * off_[i] * u[i] * u[i + 1];
    return s;
  }

 private:
  Vec diag_, off_;
};

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

RadialEnergy plap_energy(const RadialGrid& g, const Vec& u, double p) {
  if (u.size() != static_cast<std::size_t>(g.n)) throw std::invalid_argument("plap_energy: size mismatch");
  return energy(make_weights(g, p), u, p);
}

void plap_energy_gradient(const RadialGrid& g, const Vec& u, double p, Vec& d_grad, Vec& d_pstar) {
  if (u.size() != static_cast<std::size_t>(g.n)) throw std::invalid_argument("plap: size mismatch");
  energy_gradient(make_weights(g, p), u, p, d_grad, d_pstar);
}

PlapNehari plap_nehari_scale(const RadialGrid& g, const Vec& u, double p) {
  const Weights w = make_weights(g, p);
  const RadialEnergy ev = energy(w, u, p);
  if (ev.grad == 0.0 || ev.pstar == 0.0) throw std::domain_error("plap_nehari_scale: zero profile");
  PlapNehari r;
  r.t = std::pow(ev.grad / ev.pstar, 1.0 / (w.ps - p));
  r.scaled = u;
  for (double& x : r.scaled) x *= r.t;
  const RadialEnergy es = energy(w, r.scaled, p);
  r.defect = std::abs(es.grad - es.pstar) / std::max(es.grad, es.pstar);
  return r;
}

Vec plap_gaussian(const RadialGrid& g) {
  Vec r = g.radii();
  for (double& x : r) x = std::exp(-x * x);
  return r;
}

PlapReport plap_minimize(const RadialGrid& g, const Vec& init, double p, const PlapOptions& opts) {
  const Weights w = make_weights(g, p);
  const double ps = w.ps;
  const int N = g.N;
  if (init.size() != static_cast<std::size_t>(g.n)) throw std::invalid_argument("plap_minimize: size mismatch");

  PlapReport rep;
  Vec u = plap_nehari_scale(g, init, p).scaled;
  RadialEnergy ev = energy(w, u, p);
  auto quotient = [&](const Vec& x) { return energy(w, x, p).quotient; };
  double f = ev.quotient;
  rep.J_history.push_back(ev.J);

  Vec dA, dB, gQ, z, gQ_old, z_old, dir(u.size(), 0.0), trial(u.size());
  double step = 1.0;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    energy_gradient(w, u, p, dA, dB);
    const double A = ev.grad, B = ev.pstar;
    const double Bq = std::pow(B, p / ps);
    gQ.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) gQ[i] = dA[i] / Bq - (p / ps) * A / (Bq * B) * dB[i];
    TridiagPrecond K(w, u, p);
    K.solve(gQ, z);
    const double gz = dot(gQ, z);
    const double gn = std::sqrt(std::abs(gz) * K.energy(u)) / f;
    if (gn < opts.grad_tol) {
      rep.converged = true;
      break;
    }
    double beta = 0.0;
    if (it > 0) beta = std::max(0.0, (gz - dot(gQ, z_old)) / dot(gQ_old, z_old));
    for (std::size_t i = 0; i < u.size(); ++i) dir[i] = -z[i] + beta * dir[i];
    double slope = dot(gQ, dir);
    if (slope >= 0.0) {
      for (std::size_t i = 0; i < u.size(); ++i) dir[i] = -z[i];
      slope = -gz;
    }
    gQ_old = gQ;
    z_old = z;

    double a = std::min(1.0, 2.0 * step), fn = f;
    bool ok = false;
    for (int k = 0; k < 50; ++k) {
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + a * dir[i];
      fn = quotient(trial);
      if (std::isfinite(fn) && fn <= f + 1e-4 * a * slope) {
        ok = true;
        break;
      }
      a *= 0.5;
    }
    if (!ok) break;
    step = a;
    PlapNehari nh = plap_nehari_scale(g, trial, p);
    u = std::move(nh.scaled);
    const double t = nh.t;
    for (double& x : dir) x *= t;
    for (double& x : gQ_old) x /= t;
    for (double& x : z_old) x *= std::pow(t, 1.0 - p);
    ev = energy(w, u, p);
    f = ev.quotient;
    rep.J_history.push_back(ev.J);
    const std::size_t h = rep.J_history.size();
    if (h > static_cast<std::size_t>(opts.stagnation_window)) {
      const double old = rep.J_history[h - 1 - opts.stagnation_window];
      if (std::abs(old - ev.J) <= opts.stagnation_tol * std::abs(ev.J)) {
        rep.converged = true;
        ++it;
        break;
      }
    }
  }
  rep.iterations = it;
  rep.u = u;
  rep.J_final = ev.J;
  rep.quotient = ev.quotient;
  rep.S_estimate = std::pow(N * ev.J, p / N);
  rep.nehari_defect = std::abs(ev.grad - ev.pstar) / std::max(ev.grad, ev.pstar);
  rep.shape_distance = plap_shape_distance(g, u, p);
  return rep;
}

double plap_shape_distance(const RadialGrid& g, const Vec& u, double p) {
  const Weights w = make_weights(g, p);
  const double ps = w.ps;
  const std::size_t n = u.size();
  // Half-maximum radius of the profile (linear in log r).
  const double u0 = u[0];
  if (!(u0 > 0.0)) throw std::domain_error("plap_shape_distance: profile must be positive at the origin");
  double rh = w.r[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (u[i] >= 0.5 * u0 && u[i + 1] < 0.5 * u0) {
      const double s = (u[i] - 0.5 * u0) / (u[i] - u[i + 1]);
      rh = std::exp(std::log(w.r[i]) + s * (std::log(w.r[i + 1]) - std::log(w.r[i])));
      break;
    }
  BubbleParams bp{1.0, 1.0, p, g.N};
  const double q = p / (p - 1.0), e = (p - g.N) / p;
  const double rb = std::pow((std::pow(2.0, -1.0 / e) - 1.0) / bp.b, 1.0 / q);
  const double lam = rb / rh;
  Vec b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = bubble(lam * w.r[i], bp);
  auto norm = [&](const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(x[i]), ps) * w.wstar[i];
    return std::pow(w.omega * s, 1.0 / ps);
  };
  const double nu = norm(u), nb = norm(b);
  Vec diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = u[i] / nu - b[i] / nb;
  return norm(diff);
}

}  // namespace pcurl
