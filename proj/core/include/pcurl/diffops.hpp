#pragma once

#include "pcurl/grid.hpp"
#include "pcurl/spectral.hpp"

namespace pcurl {

enum class DiffMode { spectral, fd2, fd4 };

// fd modes use periodic wrap at the faces; only nodes at least 1 (fd2) or
// 2 (fd4) away from the faces are meaningful for non-periodic data.
// Passing a workspace avoids re-planning; it must match u.spec.
VectorField3 curl(const VectorField3& u, DiffMode mode = DiffMode::spectral,
                  SpectralWorkspace* ws = nullptr);
ScalarField div(const VectorField3& u, DiffMode mode = DiffMode::spectral,
                SpectralWorkspace* ws = nullptr);
VectorField3 grad(const ScalarField& phi, DiffMode mode = DiffMode::spectral,
                  SpectralWorkspace* ws = nullptr);
// Spectral Laplacian with symbol -|k'|^2.
ScalarField laplacian(const ScalarField& phi, SpectralWorkspace* ws = nullptr);

struct PoissonResult {
  ScalarField phi;
  double removed_mean = 0.0;  // mean of rho dropped to make the problem solvable
};

// Delta phi = rho - mean(rho), zero-mean gauge.
PoissonResult poisson_solve(const ScalarField& rho, SpectralWorkspace* ws = nullptr);

struct HelmholtzSplit {
  VectorField3 v;  // divergence-free part
  VectorField3 w;  // gradient part
};

HelmholtzSplit helmholtz_split(const VectorField3& u, SpectralWorkspace* ws = nullptr);

// Stencil margin of a mode: nodes this close to a face are not interior.
int stencil_margin(DiffMode mode);
bool is_interior(const GridSpec& g, int i, int j, int k, int margin);

// Max over interior nodes of |a - b| (Euclidean per node).
double max_interior_diff(const VectorField3& a, const VectorField3& b, int margin);

}  // namespace pcurl
