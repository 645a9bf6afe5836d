#include "pcurl/oracles.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pcurl {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

double LossYauParams::norm() const { return std::sqrt(dot(w, w)); }

Vec3 loss_yau(const Vec3& x, const LossYauParams& prm) {
  const double r2 = dot(x, x);
  const double s = 3.0 / ((1.0 + r2) * (1.0 + r2));
  const double wx = dot(prm.w, x);
  const Vec3 c = cross(prm.w, x);
  Vec3 u;
  for (int i = 0; i < 3; ++i) u[i] = s * ((1.0 - r2) * prm.w[i] + 2.0 * wx * x[i] + 2.0 * c[i]);
  return u;
}

Vec3 loss_yau_curl(const Vec3& x, const LossYauParams& prm) {
  Vec3 u = loss_yau(x, prm);
  const double f = 4.0 / (1.0 + dot(x, x));
  for (double& v : u) v *= f;
  return u;
}

double loss_yau_abs(const Vec3& x, const LossYauParams& prm) {
  return 3.0 * prm.norm() / (1.0 + dot(x, x));
}

double loss_yau_div(const Vec3& x, const LossYauParams& prm) {
  const double q = 1.0 + dot(x, x);
  return 6.0 * dot(prm.w, x) / (q * q);
}

namespace {

template <class F>
VectorField3 sample(const GridSpec& g, F&& f) {
  VectorField3 u(g);
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) u.set(g.index(i, j, k), f(g.node(i, j, k)));
  return u;
}

}  // namespace

VectorField3 sample_loss_yau(const GridSpec& g, const LossYauParams& prm) {
  return sample(g, [&](const Vec3& x) { return loss_yau(x, prm); });
}

VectorField3 sample_loss_yau_curl(const GridSpec& g, const LossYauParams& prm) {
  return sample(g, [&](const Vec3& x) { return loss_yau_curl(x, prm); });
}

RadialIntegral radial_integral_3d(const std::function<double(double)>& f, double rel_tol) {
  using boost::math::quadrature::gauss;
  const double half_pi = 0.5 * std::numbers::pi;
  auto g = [&](double th) {
    const double t = std::tan(th);
    const double c = std::cos(th);
    return 4.0 * std::numbers::pi * f(t) * t * t / (c * c);
  };
  RadialIntegral res;
  double prev = NAN;
  for (int panels = 1; panels <= (1 << 14); panels *= 2) {
    double acc = 0.0;
    const double w = half_pi / panels;
    for (int i = 0; i < panels; ++i) acc += gauss<double, 20>::integrate(g, i * w, (i + 1) * w);
    res.value = acc;
    res.panels = panels;
    if (std::isfinite(prev)) {
      res.last_change = std::abs(acc - prev) / std::max(std::abs(acc), 1e-300);
      if (res.last_change < rel_tol) return res;
    }
    prev = acc;
  }
  throw std::runtime_error("radial_integral_3d: no convergence");
}

LossYauReport verify_loss_yau(double p, const LossYauParams& prm) {
  const double ps = 3.0 * p / (3.0 - p);
  const double wn = prm.norm();
  LossYauReport rep;
  rep.weight_integral = radial_integral_3d([](double r) { return std::pow(1.0 + r * r, -3.0); }).value;
  // Radial profiles of |curl u| and |u| from the closed forms.
  auto abs_u = [&](double r) { return 3.0 * wn / (1.0 + r * r); };
  auto abs_cu = [&](double r) { return 4.0 / (1.0 + r * r) * abs_u(r); };
  rep.curl_integral = radial_integral_3d([&](double r) { return std::pow(abs_cu(r), p); }).value;
  rep.pstar_integral = radial_integral_3d([&](double r) { return std::pow(abs_u(r), ps); }).value;
  rep.J = rep.curl_integral / p - rep.pstar_integral / ps;
  rep.quotient = rep.curl_integral / std::pow(rep.pstar_integral, p / ps);

  // |curl u|^{-1/2} curl u = 2 (3|w|)^{-1/2} u, whose curl is 8 (3|w|)^{-1/2} u / (1+r^2)
  // = (8 / (3 sqrt 3)) |w|^{-3/2} |u| u.
  rep.coefficient = 8.0 / (3.0 * std::sqrt(3.0)) * std::pow(wn, -1.5);
  rep.mismatch_ratio = std::pow(4.0 / (3.0 * wn), 1.5);

  // Independent check: fourth-order differences of the analytic flux at fixed points.
  auto flux = [&](const Vec3& x) {
    Vec3 c = loss_yau_curl(x, prm);
    const double m = std::sqrt(dot(c, c));
    const double f = std::pow(m, p - 2.0);
    for (double& v : c) v *= f;
    return c;
  };
  const double h = 1e-3;
  const Vec3 pts[] = {{0.0, 0.0, 0.0}, {0.3, -0.2, 0.5}, {1.0, 0.0, 0.0},
                      {-0.7, 1.1, 0.4}, {2.0, -1.5, 0.8}, {0.1, 0.9, -1.7}};
  double defect = 0.0;
  for (const Vec3& x : pts) {
    double D[3][3];  // D[a][b] = d_b flux_a
    for (int b = 0; b < 3; ++b) {
      auto sh = [&](double t) {
        Vec3 y = x;
        y[b] += t;
        return flux(y);
      };
      const Vec3 p2 = sh(2 * h), p1 = sh(h), m1 = sh(-h), m2 = sh(-2 * h);
      for (int a = 0; a < 3; ++a) D[a][b] = (-p2[a] + 8 * p1[a] - 8 * m1[a] + m2[a]) / (12 * h);
    }
    const Vec3 lhs{D[2][1] - D[1][2], D[0][2] - D[2][0], D[1][0] - D[0][1]};
    const Vec3 u = loss_yau(x, prm);
    const double mu = std::sqrt(dot(u, u));
    const double g = std::pow(mu, ps - 2.0);
    double num = 0.0, den = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double rhs = rep.coefficient * g * u[a];
      num += (lhs[a] - rhs) * (lhs[a] - rhs);
      den += rhs * rhs;
    }
    defect = std::max(defect, std::sqrt(num / den));
  }
  rep.pointwise_defect = defect;
  return rep;
}

void BubbleParams::validate() const {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("BubbleParams: a, b must be positive");
  if (N < 2) throw std::invalid_argument("BubbleParams: N >= 2");
  if (!(p > 1.0 && p < N)) throw std::invalid_argument("BubbleParams: need 1 < p < N");
}

double bubble(double r, const BubbleParams& prm) {
  const double q = prm.p / (prm.p - 1.0);
  return std::pow(prm.a + prm.b * std::pow(r, q), (prm.p - prm.N) / prm.p);
}

double bubble_derivative(double r, const BubbleParams& prm) {
  const double q = prm.p / (prm.p - 1.0);
  const double e = (prm.p - prm.N) / prm.p;
  const double X = prm.a + prm.b * std::pow(r, q);
  return e * prm.b * q * std::pow(r, q - 1.0) * std::pow(X, e - 1.0);
}

namespace {

double sphere_area(int N) { return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N); }

double bubble_quotient(const BubbleParams& prm) {
  const double p = prm.p, ps = prm.N * p / (prm.N - p);
  // Split at r = 1: tanh-sinh on [0, 1], exp-sinh on the algebraic tail.
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const double tol = 1e-14;
  auto integrate = [&](auto f) {
    auto g = [&](double r) {
      const double v = f(r) * std::pow(r, prm.N - 1);
      return std::isfinite(v) ? v : 0.0;  // overflow far out in the tail
    };
    return ts.integrate(g, 0.0, 1.0, tol) + es.integrate(g, 1.0, std::numeric_limits<double>::infinity(), tol);
  };
  const double G = integrate([&](double r) { return std::pow(std::abs(bubble_derivative(r, prm)), p); });
  const double P = integrate([&](double r) { return std::pow(bubble(r, prm), ps); });
  const double w = sphere_area(prm.N);
  return w * G / std::pow(w * P, p / ps);
}

}  // namespace

BubbleSpReport bubble_S_p_report(double p, int N) {
  BubbleParams a{1.0, 1.0, p, N};
  BubbleParams b{2.0, 5.0, p, N};
  a.validate();
  BubbleSpReport rep;
  rep.S = bubble_quotient(a);
  rep.S_alt = bubble_quotient(b);
  rep.rel_gap = std::abs(rep.S - rep.S_alt) / rep.S;
  if (!(rep.rel_gap < 1e-8))
    throw std::runtime_error("bubble_S_p: quadrature did not converge, achieved rel gap " +
                             std::to_string(rep.rel_gap));
  return rep;
}

double bubble_S_p(double p, int N) { return bubble_S_p_report(p, N).S; }

double bubble_radial_residual(const BubbleParams& prm, double r) {
  const double p = prm.p;
  const int N = prm.N;
  const double ps = N * p / (N - p);
  const double q = p / (p - 1.0);
  const double e = (p - N) / p;
  const double X = prm.a + prm.b * std::pow(r, q);
  // r^{N-1} |u'|^{p-2} u' = -C r^N X^k, since (q-1)(p-1) = 1.
  const double C = std::pow(-e * prm.b * q, p - 1.0);
  const double k = (e - 1.0) * (p - 1.0);
  const double lhs = C * (N * std::pow(X, k) + k * prm.b * q * std::pow(r, q) * std::pow(X, k - 1.0));
  const double rhs = std::pow(X, e * (ps - 1.0));
  return (lhs - rhs) / rhs;
}

double fit_bubble_b(double p, int N, double a, double r_match) {
  auto f = [&](double lb) {
    BubbleParams prm{a, std::exp(lb), p, N};
    return bubble_radial_residual(prm, r_match);
  };
  double lo = std::log(1e-8), hi = std::log(1e8);
  // Scan for a sign change.
  const int steps = 400;
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= steps; ++i) {
    const double x1 = lo + (hi - lo) * i / steps;
    const double f1 = f(x1);
    if (f0 == 0.0) return std::exp(x0);
    if ((f0 < 0) != (f1 < 0)) {
      boost::uintmax_t iters = 200;
      auto tol = [](double u, double v) { return std::abs(u - v) < 1e-15 * std::max(1.0, std::abs(u)); };
      auto br = boost::math::tools::toms748_solve(f, x0, x1, f0, f1, tol, iters);
      return std::exp(0.5 * (br.first + br.second));
    }
    x0 = x1;
    f0 = f1;
  }
  throw std::runtime_error("fit_bubble_b: no root bracketed");
}

BubbleResidualReport bubble_plap_residual(double p, int N, double a, double b_scale) {
  BubbleResidualReport rep;
  rep.b_fit = fit_bubble_b(p, N, a, 1.0);
  rep.b_second = fit_bubble_b(p, N, a, 2.5);
  rep.b_used = rep.b_fit * b_scale;
  BubbleParams prm{a, rep.b_used, p, N};
  prm.validate();
  for (int i = 0; i <= 60; ++i) {
    const double r = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
    rep.max_residual = std::max(rep.max_residual, std::abs(bubble_radial_residual(prm, r)));
  }
  return rep;
}

}  // namespace pcurl
