#pragma once

#include "pcurl/discretization.hpp"
#include "pcurl/grid.hpp"

namespace pcurl {

struct WvOptions {
  double tol = 1e-10;   // relative optimality residual
  int max_iter = 500;
  bool precond = true;  // Poisson (Delta^-1) preconditioning of the potential gradient
};

struct ConstraintReport {
  double m_residual = 0.0;     // |P_W(|u|^{p*-2}u)|_{q'} / |u|_{p*}^{p*-1}
  double nehari_defect = 0.0;  // |A - B| / max(A, B)
  int iterations = 0;
  bool converged = false;
};

struct WvResult {
  Vec w;
  ConstraintReport report;
};

// Minimizes sum_c W_c |v + w|^{p*} over discrete gradients w.
// Starts from w_init if given, else from the linear split w = -P_W v.
WvResult w_of_v(const Discretization& d, const Vec& v, const Exponents& e,
                const WvOptions& opts = {}, const Vec* w_init = nullptr);

// Relative dual-norm size of div(|u|^{p*-2}u).
double m_residual(const Discretization& d, const Vec& u, const Exponents& e);

double nehari_defect(double A, double B);

struct NehariResult {
  double t = 1.0;
  Vec scaled;  // t (u + w(u))
  Vec w;       // w(u), unscaled
  double A = 0.0, B = 0.0;  // of the scaled field
  ConstraintReport report;
};

// t = (A/B)^{1/(p*-p)} with A = |curl u|_p^p, B = |u + w(u)|_{p*}^{p*}.
// Throws std::domain_error("kernel field") when A == 0.
NehariResult nehari_scale(const Discretization& d, const Vec& u, const Exponents& e,
                          const WvOptions& opts = {}, const Vec* w_init = nullptr);

// <|a|^{q-2}a - |b|^{q-2}b, a - b>, always >= 0.
double monotone_gap(const Vec3& a, const Vec3& b, double q);

// VectorField3 conveniences on the periodic box.
struct FieldWvResult {
  VectorField3 w;
  ConstraintReport report;
};
FieldWvResult w_of_v(const VectorField3& v, const Exponents& e, const WvOptions& opts = {},
                     const VectorField3* w_init = nullptr);
double m_residual(const VectorField3& u, const Exponents& e);

struct FieldNehariResult {
  double t = 1.0;
  VectorField3 scaled;
  ConstraintReport report;
};
FieldNehariResult nehari_scale(const VectorField3& u, const Exponents& e,
                               const WvOptions& opts = {});

}  // namespace pcurl
