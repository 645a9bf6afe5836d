#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "pcurl/discretization.hpp"
#include "pcurl/grid.hpp"

namespace pcurl {

enum class MeridianClass : std::uint8_t { T = 1, S = 2, O = 3 };

const char* to_string(MeridianClass c);

// Half-plane [0,R] x [-Z,Z]; nodes r_0 = 0 < ... < r_nr = R and z_0 = -Z < ... < z_nz = Z.
// stretch > 0 clusters nodes at the origin via sinh(stretch * xi) / sinh(stretch).
struct MeridianGridSpec {
  int nr = 64;
  int nz = 128;
  double R = 16.0;
  double Z = 16.0;
  double stretch_r = 0.0;
  double stretch_z = 0.0;
  void validate() const;
};

class MeridianGrid {
 public:
  explicit MeridianGrid(const MeridianGridSpec& s);
  const MeridianGridSpec& spec() const { return spec_; }
  int nr() const { return spec_.nr; }
  int nz() const { return spec_.nz; }
  double r(int i) const { return r_[i]; }
  double z(int j) const { return z_[j]; }
  double rh(int i) const { return 0.5 * (r_[i] + r_[i + 1]); }
  double zh(int j) const { return 0.5 * (z_[j] + z_[j + 1]); }
  double dr(int i) const { return r_[i + 1] - r_[i]; }
  double dz(int j) const { return z_[j + 1] - z_[j]; }
  // (r_{i+1}^2 - r_i^2) / 2
  double ar(int i) const { return 0.5 * (r_[i + 1] * r_[i + 1] - r_[i] * r_[i]); }
  // 2 pi ar(i) dz(j)
  double cell_weight(int i, int j) const;
  const Vec& r_nodes() const { return r_; }
  const Vec& z_nodes() const { return z_; }

  // Dof layout: a = u_r at (r_{i+1/2}, z_j), nr x (nz+1);
  // b = u_theta at nodes, (nr+1) x (nz+1); c = u_z at (r_i, z_{j+1/2}), (nr+1) x nz.
  std::size_t na() const { return static_cast<std::size_t>(nr()) * (nz() + 1); }
  std::size_t nb() const { return static_cast<std::size_t>(nr() + 1) * (nz() + 1); }
  std::size_t nc() const { return static_cast<std::size_t>(nr() + 1) * nz(); }
  std::size_t dofs() const { return na() + nb() + nc(); }
  std::size_t ia(int i, int j) const { return i + static_cast<std::size_t>(nr()) * j; }
  std::size_t ib(int i, int j) const { return na() + i + static_cast<std::size_t>(nr() + 1) * j; }
  std::size_t ic(int i, int j) const { return na() + nb() + i + static_cast<std::size_t>(nr() + 1) * j; }

 private:
  MeridianGridSpec spec_;
  Vec r_, z_;
};

struct MeridianField {
  MeridianGridSpec grid;
  MeridianClass cls = MeridianClass::O;
  Vec dofs;  // layout of MeridianGrid
};

// Samples cylindrical components (u_r, u_theta, u_z)(r, z) at the staggered points.
// Dirichlet boundary dofs and components outside the class are set to zero.
MeridianField sample_meridian(const MeridianGridSpec& g, MeridianClass cls,
                              const std::function<Vec3(double r, double z)>& cyl);

// Yee-type staggered finite volumes in the (r, z) half-plane with the 2 pi r weight.
// Gradients of node potentials (phi = 0 on r = R, z = +-Z) and the discrete curl
// form an exact sequence. Dofs outside the class or on the Dirichlet boundary are inert.
class MeridianDisc final : public Discretization {
 public:
  MeridianDisc(const MeridianGridSpec& g, MeridianClass cls);
  ~MeridianDisc() override;

  const MeridianGrid& grid() const { return grid_; }
  MeridianClass cls() const { return cls_; }
  const Vec& active() const { return mask_; }

  std::size_t dofs() const override { return grid_.dofs(); }
  std::size_t curl_dofs() const override;
  const CellQuadrature& quad() const override { return *quad_; }
  const CellQuadrature& curl_quad() const override { return *cquad_; }
  const Vec& mass() const override { return mass_; }

  void curl(const Vec& u, Vec& out) const override;
  void curl_transpose(const Vec& c, Vec& out) const override;
  void project_W(Vec& f) const override;
  void project_V(Vec& f) const override;
  void grad_div(Vec& f) const override;
  void precondition(Vec& g) const override;
  // Lumped isotropic Hessian, direct factorization.
  bool newton_project_W(const Vec& u, double q, Vec& f) const override;

  // Discrete gradient of an active-node potential (length = potential_size()).
  std::size_t potential_size() const;
  void gradient(const Vec& phi, Vec& out) const;

 private:
  struct Impl;
  MeridianGrid grid_;
  MeridianClass cls_;
  std::unique_ptr<CellQuadrature> quad_, cquad_;
  Vec mass_, mask_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pcurl
