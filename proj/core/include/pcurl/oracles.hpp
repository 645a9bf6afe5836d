#pragma once

#include <functional>

#include "pcurl/grid.hpp"

namespace pcurl {

struct LossYauParams {
  Vec3 w{0.0, 0.0, 4.0 / 3.0};
  double norm() const;
};

// u(x) = 3 (1+|x|^2)^{-2} ((1-|x|^2) w + 2 (w.x) x + 2 w x x)
Vec3 loss_yau(const Vec3& x, const LossYauParams& prm);
// Closed forms: curl u = 4 (1+|x|^2)^{-1} u,  |u| = 3 (1+|x|^2)^{-1} |w|,
// div u = 6 (w.x) (1+|x|^2)^{-2}.
Vec3 loss_yau_curl(const Vec3& x, const LossYauParams& prm);
double loss_yau_abs(const Vec3& x, const LossYauParams& prm);
double loss_yau_div(const Vec3& x, const LossYauParams& prm);

VectorField3 sample_loss_yau(const GridSpec& g, const LossYauParams& prm);
VectorField3 sample_loss_yau_curl(const GridSpec& g, const LossYauParams& prm);

struct RadialIntegral {
  double value = 0.0;
  int panels = 0;
  double last_change = 0.0;  // relative change at the final doubling
};

// Integral over R^3 of f(|x|), via r = tan(theta) and composite Gauss-Legendre
// panels doubled until successive results agree to rel_tol.
RadialIntegral radial_integral_3d(const std::function<double(double)>& f, double rel_tol = 1e-13);

struct LossYauReport {
  double weight_integral = 0.0;  // int (1+|x|^2)^{-3} dx
  double curl_integral = 0.0;    // int |curl u|^p
  double pstar_integral = 0.0;   // int |u|^{p*}
  double J = 0.0;
  double quotient = 0.0;         // curl_integral / pstar_integral^{p/p*}
  double coefficient = 0.0;      // c with curl(|curl u|^{p-2} curl u) = c |u|^{p*-2} u, from the closed forms
  double mismatch_ratio = 0.0;   // predicted c for p = 3/2: (4/(3|w|))^{3/2}
  double pointwise_defect = 0.0; // max relative gap between a finite-difference evaluation and c |u|^{p*-2} u
};

// Radial quadratures of the energy terms and the pointwise curl identity.
// The closed-form coefficient is only defined for p = 3/2 (p* = 3).
LossYauReport verify_loss_yau(double p, const LossYauParams& prm);

struct BubbleParams {
  double a = 1.0;
  double b = 1.0;
  double p = 2.0;
  int N = 3;
  void validate() const;
};

// u(r) = (a + b r^{p/(p-1)})^{(p-N)/p}
double bubble(double r, const BubbleParams& prm);
double bubble_derivative(double r, const BubbleParams& prm);

struct BubbleSpReport {
  double S = 0.0;        // at (a,b) = (1,1)
  double S_alt = 0.0;    // at (a,b) = (2,5)
  double rel_gap = 0.0;
};

// Rayleigh quotient |grad u|_p^p / |u|_{p*}^p of the bubble by tanh-sinh
// quadrature in r = tan(theta). Throws if the two (a,b) pairs disagree beyond 1e-8.
BubbleSpReport bubble_S_p_report(double p, int N);
double bubble_S_p(double p, int N);

// Relative residual of -Delta_p u - u^{p*-1} at radius r (analytic derivatives).
double bubble_radial_residual(const BubbleParams& prm, double r);

// b making the residual vanish at r_match, for given (p, N, a).
double fit_bubble_b(double p, int N, double a, double r_match = 1.0);

struct BubbleResidualReport {
  double b_fit = 0.0;
  double b_second = 0.0;      // fitted at a second radius
  double b_used = 0.0;
  double max_residual = 0.0;  // over log-spaced radii 1e-3 .. 1e3
};

// b_scale multiplies the fitted b (1 = fitted, 2 = detuned control).
BubbleResidualReport bubble_plap_residual(double p, int N, double a, double b_scale = 1.0);

}  // namespace pcurl
