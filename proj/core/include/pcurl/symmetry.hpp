#pragma once

#include <cstdint>
#include <string>

#include "pcurl/energy.hpp"
#include "pcurl/grid.hpp"
#include "pcurl/meridian.hpp"
#include "pcurl/minimizer.hpp"

namespace pcurl {

// Frame split relative to the x3 axis: u_rho along (x1, x2, 0), u_tau along
// (-x2, x1, 0), u_zeta along e3. On axis nodes rho = tau = 0 and zeta = u.
struct OComponents {
  VectorField3 rho, tau, zeta;
};
OComponents o_components(const VectorField3& u);

// T(u) = -u_rho + u_tau - u_zeta and S(u) = -T(u).
VectorField3 apply_T(const VectorField3& u);
VectorField3 apply_S(const VectorField3& u);
// (id + T)/2 = u_tau and (id + S)/2 = u_rho + u_zeta.
VectorField3 project_T(const VectorField3& u);
VectorField3 project_S(const VectorField3& u);

// (R u)(x) = R u(R^-1 x) for R a quarter turn about x3, exact on the grid.
// Needs n1 == n2 and L1 == L2.
VectorField3 rotate_quarter(const VectorField3& u, int quarter_turns);
// Average over the four grid rotations.
VectorField3 project_O_c4(const VectorField3& u);
// Average of R_theta u(R_theta^-1 x) over n_theta angles, trilinear interpolation.
VectorField3 project_O(const VectorField3& u, int n_theta = 32);

// |u - P u|_2 / |u|_2 with P the class projector composed with the C4 average.
double class_defect(const VectorField3& u, MeridianClass cls);

// Meridian grid whose sample points are Cartesian nodes of g along the
// coordinate rays (dr = 2 h1, dz = 2 h3). On it reduce(lift(m)) == m exactly.
MeridianGridSpec compatible_meridian(const GridSpec& g);

// Cylindrical components sampled at the staggered points, averaged over
// n_rays equally spaced half-planes. Rejects inputs whose class_defect exceeds tol.
MeridianField reduce(const VectorField3& u, MeridianClass cls, const MeridianGridSpec& mg,
                     double tol = 1e-6, int n_rays = 4);
// Bilinear interpolation with axis parity (u_r, u_theta odd in r, u_z even);
// zero outside the meridian box.
VectorField3 lift(const MeridianField& m, const GridSpec& g);

// Energy terms and quotient with the 2 pi r weight.
EnergyEval meridian_energy(const MeridianField& m, const Exponents& e, const WvOptions& wv = {});

struct MeridianMinimum {
  MeridianField field;  // u = v + w(v) on the Nehari set
  MinimizeReport report;
};

MeridianMinimum meridian_minimize(const MeridianField& init, const Exponents& e,
                                  const MinimizeOptions& opts, const IterationCallback& cb = {});

// PCRL meridian files: class T stores u_theta, S stores (u_r, u_z), O all three,
// each padded to (n_r + 1) x (n_z + 1) slots.
void save_meridian(const std::string& path, const MeridianField& m, double p);
MeridianField load_meridian(const std::string& path, double* p = nullptr);

// Loss-Yau field with w = (0, 0, wz) in cylindrical components.
Vec3 loss_yau_cylindrical(double r, double z, double wz = 4.0 / 3.0);

// Loss-Yau start restricted to the class (T keeps u_theta, S keeps u_r and u_z).
MeridianField loss_yau_meridian(const MeridianGridSpec& g, MeridianClass cls);
// Sum of seeded Gaussian lobes on the axis; u_r and u_theta vanish linearly at r = 0.
MeridianField random_meridian(const MeridianGridSpec& g, MeridianClass cls, std::uint64_t seed,
                              int lobes = 4);

}  // namespace pcurl
