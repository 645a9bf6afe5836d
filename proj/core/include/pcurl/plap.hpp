#pragma once

#include <functional>

#include "pcurl/grid.hpp"

namespace pcurl {

// Log-spaced radii r_0 < ... < r_{n-1} = R_max in R^N.
struct RadialGrid {
  int n = 1500;
  double r_min = 1e-3;
  double R_max = 1e3;
  int N = 3;

  void validate() const;
  Vec radii() const;
};

struct RadialEnergy {
  double grad = 0.0;   // |grad u|_p^p, including the inner ball and the algebraic tail
  double pstar = 0.0;  // |u|_{p*}^{p*}
  double J = 0.0;
  double quotient = 0.0;  // grad / pstar^{p/p*}
};

// Radial profile on r_0..r_{n-1}. u is taken constant on [0, r_0] and
// u(r) = u(R) (R/r)^{(N-p)/(p-1)} beyond R_max.
RadialEnergy plap_energy(const RadialGrid& g, const Vec& u, double p);

// Derivatives of grad and pstar with respect to the nodal values.
void plap_energy_gradient(const RadialGrid& g, const Vec& u, double p, Vec& d_grad, Vec& d_pstar);

struct PlapNehari {
  double t = 1.0;
  Vec scaled;
  double defect = 0.0;  // |A - B| / max(A, B) after scaling
};

// t = (A/B)^{1/(p*-p)}. Throws std::domain_error on a zero profile.
PlapNehari plap_nehari_scale(const RadialGrid& g, const Vec& u, double p);

struct PlapOptions {
  int max_iter = 4000;
  double grad_tol = 1e-9;
  double stagnation_tol = 1e-13;
  int stagnation_window = 50;
};

struct PlapReport {
  Vec u;  // final profile, on the Nehari set
  std::vector<double> J_history;
  double J_final = 0.0;
  double S_estimate = 0.0;  // (N J_final)^{p/N}
  double quotient = 0.0;
  double nehari_defect = 0.0;
  double shape_distance = 0.0;  // relative L^{p*} gap to the matched bubble
  int iterations = 0;
  bool converged = false;
};

// Gaussian start exp(-r^2).
Vec plap_gaussian(const RadialGrid& g);

PlapReport plap_minimize(const RadialGrid& g, const Vec& init, double p,
                         const PlapOptions& opts = {});

// Relative L^{p*} distance between the normalized profile and the bubble
// matched at the half-maximum radius.
double plap_shape_distance(const RadialGrid& g, const Vec& u, double p);

}  // namespace pcurl
