#pragma once

#include <limits>

#include "pcurl/constraint.hpp"
#include "pcurl/diffops.hpp"
#include "pcurl/discretization.hpp"

namespace pcurl {

struct EnergyEval {
  double J = 0.0;
  double curl_term = 0.0;   // (1/p) |curl u|_p^p
  double pstar_term = 0.0;  // (1/p*) |u|_{p*}^{p*}
  double quotient = std::numeric_limits<double>::quiet_NaN();
};

// With eps > 0 the curl density is (|curl u|^2 + eps^2)^{p/2} - eps^p.
EnergyEval energy_J(const Discretization& d, const Vec& u, const Exponents& e, double eps = 0.0);

// Derivative of energy_J as a covector (plain partial derivatives per dof).
Vec grad_J_covector(const Discretization& d, const Vec& u, const Exponents& e, double eps = 0.0);
// Mass-Riesz representative: covector / mass.
Vec grad_J(const Discretization& d, const Vec& u, const Exponents& e, double eps = 0.0);

struct QuotientEval {
  double Q = 0.0;
  double A = 0.0;  // |curl v|_p^p
  double B = 0.0;  // |v + w(v)|_{p*}^{p*}
  Vec w;
  ConstraintReport report;
};

// |curl v|_p^p / |v + w(v)|_{p*}^p. Throws "kernel field" if curl v == 0.
QuotientEval quotient_Q(const Discretization& d, const Vec& v, const Exponents& e,
                        const WvOptions& opts = {}, const Vec* w_init = nullptr);

// VectorField3 forms on the periodic box.
EnergyEval energy_J(const VectorField3& u, const Exponents& e, double eps = 0.0);
VectorField3 grad_J(const VectorField3& u, const Exponents& e, double eps = 0.0);
double quotient_Q(const VectorField3& v, const Exponents& e, const WvOptions& opts = {});

// Relative strong-form residual over interior nodes (L2 over nodes):
// |curl(|curl u|^{p-2} curl u) - |u|^{p*-2} u| / | |u|^{p*-2} u |.
double pde_residual(const VectorField3& u, const Exponents& e, DiffMode mode = DiffMode::spectral);

}  // namespace pcurl
