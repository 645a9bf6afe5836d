#pragma once

#include <memory>

#include "pcurl/grid.hpp"
#include "pcurl/spectral.hpp"

namespace pcurl {

// Per-cell quadratic form: s_c(u, v) = sum_k alpha_ck u_k v_k, so the
// integral of |u|^q is sum_c W_c s_c(u, u)^(q/2).
class CellQuadrature {
 public:
  virtual ~CellQuadrature() = default;
  virtual std::size_t cells() const = 0;
  virtual const Vec& weights() const = 0;
  virtual void pair(const Vec& u, const Vec& v, Vec& s) const = 0;
  // out_k = sum_c coef_c alpha_ck u_k  (derivative of sum_c coef_c s_c(u,u)/2)
  virtual void pullback(const Vec& coef, const Vec& u, Vec& out) const = 0;
};

// sum_c W_c (s_c + eps2)^(q/2)
double integral_pow(const CellQuadrature& quad, const Vec& u, double q, double eps2 = 0.0);

// A vector-field discretization with an exact discrete sequence
// gradients -> fields -> curls. Operators work on flat dof vectors.
// Implementations keep scratch buffers: not safe for concurrent use.
class Discretization {
 public:
  virtual ~Discretization() = default;
  virtual std::size_t dofs() const = 0;
  virtual std::size_t curl_dofs() const = 0;
  virtual const CellQuadrature& quad() const = 0;
  virtual const CellQuadrature& curl_quad() const = 0;
  // Lumped dof mass: the diagonal of sum_c W_c s_c.
  virtual const Vec& mass() const = 0;

  virtual void curl(const Vec& u, Vec& out) const = 0;
  // Plain matrix transpose of curl (no mass weights).
  virtual void curl_transpose(const Vec& c, Vec& out) const = 0;

  // Mass-orthogonal projection onto discrete gradients, in place.
  virtual void project_W(Vec& f) const = 0;
  // Projection onto the admissible divergence-free space V_h, in place.
  virtual void project_V(Vec& f) const = 0;
  // G Mphi^-1 G^T M f: the gradient-space direction without Poisson preconditioning.
  virtual void grad_div(Vec& f) const = 0;
  // Inverse Hodge Laplacian applied to a Riesz representative on V_h.
  virtual void precondition(Vec& g) const = 0;
  // Newton step in W: f <- G (G^T H G)^-1 G^T M f with H an approximation of the
  // Hessian of (1/q) sum_c W_c s_c(u,u)^(q/2). Returns false when unsupported.
  virtual bool newton_project_W(const Vec& u, double q, Vec& f) const {
    (void)u;
    (void)q;
    (void)f;
    return false;
  }
};

double mass_inner(const Discretization& d, const Vec& a, const Vec& b);

// Periodic box, spectral operators, one cell per node.
class PeriodicDisc final : public Discretization {
 public:
  explicit PeriodicDisc(const GridSpec& g);
  ~PeriodicDisc() override;

  const GridSpec& spec() const { return spec_; }
  SpectralWorkspace& workspace() const { return *ws_; }

  std::size_t dofs() const override { return 3 * spec_.size(); }
  std::size_t curl_dofs() const override { return 3 * spec_.size(); }
  const CellQuadrature& quad() const override { return *quad_; }
  const CellQuadrature& curl_quad() const override { return *quad_; }
  const Vec& mass() const override { return mass_; }

  void curl(const Vec& u, Vec& out) const override;
  void curl_transpose(const Vec& c, Vec& out) const override { curl(c, out); }
  void project_W(Vec& f) const override;
  void project_V(Vec& f) const override;
  void grad_div(Vec& f) const override;
  void precondition(Vec& g) const override;
  // Exact pointwise Hessian; the Poisson-type system is solved inexactly by CG,
  // preconditioned with a multigrid V-cycle on the Hessian diagonal.
  bool newton_project_W(const Vec& u, double q, Vec& f) const override;

  // Full gradient tensor: out[3*a + b] = d_b u_a (9 blocks of N).
  void gradient_tensor(const Vec& u, Vec& out) const;
  // Plain transpose of gradient_tensor.
  void gradient_tensor_transpose(const Vec& t, Vec& out) const;

 private:
  enum class SpecOp { projW, projV, gradDiv, hodgeInv };
  void spectral_op(Vec& f, SpecOp op) const;

  GridSpec spec_;
  std::unique_ptr<SpectralWorkspace> ws_;
  std::unique_ptr<CellQuadrature> quad_;
  Vec mass_;
  mutable CVec buf_[3];
};

}  // namespace pcurl
