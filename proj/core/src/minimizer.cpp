#include "pcurl/minimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pcurl/diffops.hpp"
#include "pcurl/energy.hpp"
#include "pcurl/oracles.hpp"
#include "pcurl/symmetry.hpp"

namespace pcurl {

const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::full: return "full";
    case Symmetry::O: return "O";
    case Symmetry::T: return "T";
    case Symmetry::S: return "S";
  }
  return "?";
}

Symmetry parse_symmetry(const std::string& s) {
  if (s == "full") return Symmetry::full;
  if (s == "O") return Symmetry::O;
  if (s == "T") return Symmetry::T;
  if (s == "S") return Symmetry::S;
  throw std::invalid_argument("unknown symmetry '" + s + "' (full|O|T|S)");
}

void MinimizeOptions::validate() const {
  if (max_outer < 0) throw std::invalid_argument("max_outer must be >= 0");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] >= 0.0)) throw std::invalid_argument("eps_schedule entries must be >= 0");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
      throw std::invalid_argument("eps_schedule must be strictly decreasing");
  }
  if (renormalize_every < 1) throw std::invalid_argument("renormalize_every must be >= 1");
  if (stagnation_window < 1) throw std::invalid_argument("stagnation_window must be >= 1");
  if (!(wv.tol > 0.0) || wv.max_iter < 1) throw std::invalid_argument("invalid w(v) options");
  meridian.validate();
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// |curl v|_2, the Hodge norm on V_h.
double curl_norm(const Discretization& d, const Vec& v) {
  Vec c;
  d.curl(v, c);
  return std::sqrt(integral_pow(d.curl_quad(), c, 2.0));
}

double rms_curl(const Discretization& d, const Vec& v) {
  double wsum = 0.0;
  for (double w : d.curl_quad().weights()) wsum += w;
  return curl_norm(d, v) / std::sqrt(wsum);
}

// Derivative of sum_c W_c (s_c(x) + eps2)^{q/2} as a covector.
void pow_covector(const CellQuadrature& cq, const Vec& x, double q, double eps2, Vec& out) {
  Vec s, coef;
  cq.pair(x, x, s);
  const Vec& W = cq.weights();
  coef.resize(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) {
    const double y = s[c] + eps2;
    coef[c] = y > 0.0 ? q * W[c] * std::pow(y, 0.5 * q - 1.0) : 0.0;
  }
  cq.pullback(coef, x, out);
}

// Scale-invariant objective on V_h evaluated through trial/accept.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double trial(const Vec& v) = 0;
  virtual void accept() = 0;
  virtual double value() const = 0;
  virtual void covector(const Vec& v, double eps, Vec& g) const = 0;
  // Rescale v (and cached state) onto the constraint set; returns the factor.
  virtual double rescale(Vec& v) { (void)v; return 1.0; }
};

class QuotientObjective final : public Objective {
 public:
  QuotientObjective(const Discretization& d, const Exponents& e, const WvOptions& wv, const Vec& v)
      : d_(d), e_(e), wv_(wv) {
    QuotientEval q = quotient_Q(d_, v, e_, wv_);
    cur_ = std::move(q);
  }
  double trial(const Vec& v) override {
    try {
      trial_ = quotient_Q(d_, v, e_, wv_, &cur_.w);
    } catch (const std::domain_error&) {
      return INFINITY;
    }
    return trial_.Q;
  }
  void accept() override { cur_ = std::move(trial_); }
  double value() const override { return cur_.Q; }
  void covector(const Vec& v, double eps, Vec& g) const override {
    const double p = e_.p(), ps = e_.p_star();
    Vec cu, pa, ca, cb, ut(v.size());
    d_.curl(v, cu);
    pow_covector(d_.curl_quad(), cu, p, eps * eps, pa);
    d_.curl_transpose(pa, ca);
    for (std::size_t k = 0; k < v.size(); ++k) ut[k] = v[k] + cur_.w[k];
    pow_covector(d_.quad(), ut, ps, 0.0, cb);
    const double Bq = std::pow(cur_.B, p / ps);
    const double fb = (p / ps) * cur_.A / (Bq * cur_.B);
    g.resize(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) g[k] = ca[k] / Bq - fb * cb[k];
  }
  double rescale(Vec& v) override {
    const double p = e_.p(), ps = e_.p_star();
    const double t = std::pow(cur_.A / cur_.B, 1.0 / (ps - p));
    for (double& x : v) x *= t;
    for (double& x : cur_.w) x *= t;
    cur_.A *= std::pow(t, p);
    cur_.B *= std::pow(t, ps);
    return t;
  }
  const QuotientEval& current() const { return cur_; }

 private:
  const Discretization& d_;
  Exponents e_;
  WvOptions wv_;
  QuotientEval cur_, trial_;
};

struct DescentOutcome {
  int iterations = 0;
  bool converged = false;
  std::string reason;
};

// Preconditioned Polak-Ribiere+ descent with Armijo backtracking on the true
// objective; eps only shapes the search direction.
template <class OnAccept>
DescentOutcome cg_descent(const Discretization& d, Vec& v, Objective& obj, const MinimizeOptions& opts,
                          const std::function<double(const Vec&)>& eps_scale, OnAccept&& on_accept) {
  DescentOutcome out;
  std::vector<double> schedule = opts.eps_schedule;
  if (schedule.empty() || schedule.back() != 0.0) schedule.push_back(0.0);

  auto direction = [&](const Vec& g, Vec& z) {
    z.resize(g.size());
    const Vec& m = d.mass();
    for (std::size_t k = 0; k < g.size(); ++k) z[k] = g[k] / m[k];
    d.project_V(z);
    d.precondition(z);
  };

  Vec g0, z0, g, z, g_old, z_old, dir(v.size(), 0.0), trial(v.size());
  double rel_step = 0.1;
  std::vector<double> fhist{obj.value()};
  int accepted = 0;

  auto grad_norm = [&](const Vec& gg, const Vec& zz) {
    return std::sqrt(std::max(0.0, dot(gg, zz))) * curl_norm(d, v) / obj.value();
  };

  {
    obj.covector(v, 0.0, g0);
    direction(g0, z0);
    on_accept(0, grad_norm(g0, z0), 0.0, false);
  }

  for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
    const bool last = stage + 1 == schedule.size();
    bool have_old = false;
    std::size_t stage_start = fhist.size() - 1;
    for (;;) {
      if (out.iterations >= opts.max_outer) {
        out.reason = "max_outer";
        return out;
      }
      obj.covector(v, 0.0, g0);
      direction(g0, z0);
      const double gn0 = grad_norm(g0, z0);
      if (gn0 < opts.grad_tol) {
        out.converged = true;
        out.reason = "grad_tol";
        return out;
      }
      const double eps = schedule[stage] * eps_scale(v);
      if (eps > 0.0) {
        obj.covector(v, eps, g);
        direction(g, z);
        if (!last && grad_norm(g, z) < opts.grad_tol) break;
      } else {
        g = g0;
        z = z0;
      }

      double beta = 0.0;
      if (have_old) {
        const double den = dot(g_old, z_old);
        if (den > 0.0) beta = std::max(0.0, (dot(g, z) - dot(g, z_old)) / den);
      }
      for (std::size_t k = 0; k < v.size(); ++k) dir[k] = -z[k] + beta * dir[k];
      double slope = dot(g0, dir);
      if (!(slope < 0.0)) {
        for (std::size_t k = 0; k < v.size(); ++k) dir[k] = -z[k];
        slope = dot(g0, dir);
      }
      if (!(slope < 0.0)) {
        for (std::size_t k = 0; k < v.size(); ++k) dir[k] = -z0[k];
        slope = dot(g0, dir);
      }
      g_old = g;
      z_old = z;
      have_old = true;

      const double f = obj.value();
      const double scale = curl_norm(d, v) / std::max(curl_norm(d, dir), 1e-300);
      double a = std::min(rel_step * 2.0, 0.5) * scale;
      bool ok = false;
      for (int k = 0; k < 40; ++k) {
        for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + a * dir[i];
        const double fn = obj.trial(trial);
        if (std::isfinite(fn) && fn <= f + 1e-4 * a * slope) {
          ok = true;
          break;
        }
        a *= 0.5;
      }
      ++out.iterations;
      if (!ok) {
        have_old = false;
        if (last) {
          out.reason = "line_search";
          return out;
        }
        break;
      }
      rel_step = a / scale;
      v = trial;
      obj.accept();
      ++accepted;
      bool rescaled = false;
      if (accepted % opts.renormalize_every == 0) {
        const double t = obj.rescale(v);
        for (double& x : dir) x *= t;
        for (double& x : g_old) x /= t;
        for (double& x : z_old) x /= t;
        rescaled = true;
      }
      fhist.push_back(obj.value());
      on_accept(out.iterations, gn0, eps, rescaled);

      const std::size_t h = fhist.size();
      const std::size_t win = static_cast<std::size_t>(opts.stagnation_window);
      if (h - 1 - stage_start >= win) {
        const double old = fhist[h - 1 - win];
        if (std::abs(old - fhist.back()) <= opts.stagnation_tol * std::abs(fhist.back())) {
          if (last) {
            out.converged = true;
            out.reason = "stagnation";
            return out;
          }
          break;
        }
      }
    }
  }
  out.reason = "schedule_exhausted";
  return out;
}

}  // namespace

DiscreteMinimum minimize_quotient(const Discretization& d, const Vec& v0, const Exponents& e,
                                  const MinimizeOptions& opts, const IterationCallback& cb) {
  opts.validate();
  const auto t0 = Clock::now();
  const double p = e.p(), ps = e.p_star();
  Vec v = v0;
  d.project_V(v);
  {
    Vec c;
    d.curl(v, c);
    if (integral_pow(d.curl_quad(), c, 2.0) == 0.0) throw std::domain_error("kernel field");
  }
  QuotientObjective obj(d, e, opts.wv, v);
  obj.rescale(v);

  DiscreteMinimum res;
  MinimizeReport& rep = res.report;
  bool last_rescaled = true;
  auto record = [&](int iter, double gn, double eps, bool rescaled) {
    last_rescaled = rescaled || iter == 0;
    const QuotientEval& q = obj.current();
    IterationRecord r;
    r.iter = iter;
    // Recompute both terms from the stored field for an honest defect.
    Vec ut(v.size()), c;
    for (std::size_t k = 0; k < v.size(); ++k) ut[k] = v[k] + q.w[k];
    d.curl(ut, c);
    const double A = integral_pow(d.curl_quad(), c, p);
    const double B = integral_pow(d.quad(), ut, ps);
    r.J = A / p - B / ps;
    r.Q = q.Q;
    r.nehari_defect = nehari_defect(A, B);
    r.grad_norm = gn;
    r.eps = eps;
    r.wall_ms = ms_since(t0);
    rep.records.push_back(r);
    if (rescaled || iter == 0) rep.J_history.push_back(r.J);
    rep.constraint = q.report;
    rep.constraint.nehari_defect = r.nehari_defect;
    if (cb) cb(r);
  };
  auto eps_scale = [&](const Vec& x) { return rms_curl(d, x); };
  DescentOutcome out = cg_descent(d, v, obj, opts, eps_scale, record);
  if (!last_rescaled) {
    obj.rescale(v);
    record(out.iterations, rep.records.back().grad_norm, 0.0, true);
  }

  const QuotientEval& q = obj.current();
  res.v = v;
  res.u.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) res.u[k] = v[k] + q.w[k];
  rep.iterations = out.iterations;
  rep.converged = out.converged;
  rep.stop_reason = out.reason;
  rep.J_final = rep.records.back().J;
  rep.Q_final = q.Q;
  rep.S_estimate = std::pow(3.0 * rep.J_final, p / 3.0);
  rep.wall_time = ms_since(t0) / 1000.0;
  return res;
}

GroundState minimize_ground_state(const VectorField3& init, const Exponents& e, const MinimizeOptions& opts,
                                  const IterationCallback& cb) {
  require_finite(init, "minimize_ground_state");
  opts.validate();
  if (opts.symmetry != Symmetry::full) {
    const MeridianClass cls = opts.symmetry == Symmetry::O   ? MeridianClass::O
                              : opts.symmetry == Symmetry::T ? MeridianClass::T
                                                             : MeridianClass::S;
    MeridianField m = reduce(init, cls, opts.meridian);
    MeridianMinimum mm = meridian_minimize(m, e, opts, cb);
    return {lift(mm.field, init.spec), std::move(mm.report)};
  }
  PeriodicDisc d(init.spec);
  DiscreteMinimum dm = minimize_quotient(d, init.flat(), e, opts, cb);
  return {VectorField3::from_flat(init.spec, dm.u), std::move(dm.report)};
}

VectorField3 random_divfree_bump(const GridSpec& g, std::uint64_t seed, int lobes, double width) {
  g.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double Lmin = std::min({g.L[0], g.L[1], g.L[2]});
  const double sigma = width > 0.0 ? width : Lmin / 10.0;
  struct Lobe {
    Vec3 c, a;
  };
  std::vector<Lobe> ls(lobes);
  for (auto& l : ls)
    for (int i = 0; i < 3; ++i) {
      l.c[i] = uni(rng) * g.L[i] / 8.0;
      l.a[i] = uni(rng);
    }
  VectorField3 A(g);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const Vec3 x = g.node(i, j, k);
        Vec3 val{0.0, 0.0, 0.0};
        for (const auto& l : ls) {
          double r2 = 0.0;
          for (int a = 0; a < 3; ++a) {
            double dx = x[a] - l.c[a];
            dx -= g.L[a] * std::round(dx / g.L[a]);
            r2 += dx * dx;
          }
          const double f = std::exp(-0.5 * r2 / (sigma * sigma));
          for (int a = 0; a < 3; ++a) val[a] += f * l.a[a];
        }
        A.set(g.index(i, j, k), val);
      }
  VectorField3 v = curl(A);
  PeriodicDisc d(g);
  Vec f = v.flat();
  d.project_V(f);
  return VectorField3::from_flat(g, f);
}

namespace {

// |curl v|_p^p / |grad v|_p^p on the periodic box.
class HpObjective final : public Objective {
 public:
  HpObjective(const PeriodicDisc& d, double p, const Vec& v) : d_(d), p_(p), n_(d.spec().size()) {
    cur_ = eval(v);
  }
  double trial(const Vec& v) override {
    trial_ = eval(v);
    return trial_.f;
  }
  void accept() override { cur_ = trial_; }
  double value() const override { return cur_.f; }
  void covector(const Vec& v, double eps, Vec& g) const override {
    Vec cu, pa, ca, t, pt, cg;
    d_.curl(v, cu);
    pow_covector(d_.curl_quad(), cu, p_, eps * eps, pa);
    d_.curl_transpose(pa, ca);
    d_.gradient_tensor(v, t);
    const double e2 = eps * eps;
    const double h3 = d_.spec().cell_volume();
    pt.assign(9 * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = e2;
      for (int b = 0; b < 9; ++b) s += t[b * n_ + i] * t[b * n_ + i];
      const double c = s > 0.0 ? p_ * h3 * std::pow(s, 0.5 * p_ - 1.0) : 0.0;
      for (int b = 0; b < 9; ++b) pt[b * n_ + i] = c * t[b * n_ + i];
    }
    d_.gradient_tensor_transpose(pt, cg);
    g.resize(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) g[k] = ca[k] / cur_.G - cur_.A / (cur_.G * cur_.G) * cg[k];
  }

 private:
  struct Eval {
    double A = 0.0, G = 0.0, f = 0.0;
  };
  Eval eval(const Vec& v) const {
    Vec cu, t;
    d_.curl(v, cu);
    Eval ev;
    ev.A = integral_pow(d_.curl_quad(), cu, p_);
    d_.gradient_tensor(v, t);
    const double h3 = d_.spec().cell_volume();
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int b = 0; b < 9; ++b) s += t[b * n_ + i] * t[b * n_ + i];
      ev.G += h3 * std::pow(s, 0.5 * p_);
    }
    ev.f = ev.G > 0.0 ? ev.A / ev.G : INFINITY;
    return ev;
  }

  const PeriodicDisc& d_;
  double p_;
  std::size_t n_;
  Eval cur_, trial_;
};

}  // namespace

HpEstimate estimate_Hp(const GridSpec& g, const Exponents& e, const MinimizeOptions& opts) {
  opts.validate();
  PeriodicDisc d(g);
  Vec v = random_divfree_bump(g, opts.seed).flat();
  HpObjective obj(d, e.p(), v);
  HpEstimate est;
  auto rec = [&](int, double, double, bool) { est.history.push_back(obj.value()); };
  auto eps_scale = [&](const Vec& x) { return rms_curl(d, x); };
  DescentOutcome out = cg_descent(d, v, obj, opts, eps_scale, rec);
  est.H = obj.value();
  est.iterations = out.iterations;
  est.converged = out.converged;
  return est;
}

SpEstimate estimate_Sp(double p, int N, const RadialGrid& g, const PlapOptions& opts) {
  RadialGrid rg = g;
  rg.N = N;
  SpEstimate s;
  s.plap_report = plap_minimize(rg, plap_gaussian(rg), p, opts);
  s.plap = s.plap_report.S_estimate;
  s.bubble = bubble_S_p(p, N);
  s.rel_gap = std::abs(s.plap - s.bubble) / s.bubble;
  return s;
}

}  // namespace pcurl
