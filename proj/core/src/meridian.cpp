#include "pcurl/meridian.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcurl {

const char* to_string(MeridianClass c) {
  switch (c) {
    case MeridianClass::T: return "T";
    case MeridianClass::S: return "S";
    case MeridianClass::O: return "O";
  }
  return "?";
}

void MeridianGridSpec::validate() const {
  if (nr < 4 || nz < 4) throw std::invalid_argument("MeridianGridSpec: nr, nz must be >= 4");
  if (!(R > 0.0) || !(Z > 0.0)) throw std::invalid_argument("MeridianGridSpec: R, Z must be positive");
  if (stretch_r < 0.0 || stretch_z < 0.0)
    throw std::invalid_argument("MeridianGridSpec: stretch must be >= 0");
}

namespace {

double stretch_map(double xi, double beta) {
  return beta > 0.0 ? std::sinh(beta * xi) / std::sinh(beta) : xi;
}

}  // namespace

MeridianGrid::MeridianGrid(const MeridianGridSpec& s) : spec_(s) {
  s.validate();
  r_.resize(s.nr + 1);
  z_.resize(s.nz + 1);
  for (int i = 0; i <= s.nr; ++i) r_[i] = s.R * stretch_map(static_cast<double>(i) / s.nr, s.stretch_r);
  for (int j = 0; j <= s.nz; ++j)
    z_[j] = s.Z * stretch_map(2.0 * j / s.nz - 1.0, s.stretch_z);
  r_[0] = 0.0;
  r_[s.nr] = s.R;
  z_[0] = -s.Z;
  z_[s.nz] = s.Z;
}

double MeridianGrid::cell_weight(int i, int j) const {
  return 2.0 * std::numbers::pi * ar(i) * dz(j);
}

namespace {

enum class Loc { cell, redge, zedge, node };

// Cell-averaged squares of staggered components.
class StaggeredQuadrature final : public CellQuadrature {
 public:
  struct Block {
    Loc loc;
    std::size_t offset;
  };
  StaggeredQuadrature(const MeridianGrid& g, std::vector<Block> blocks, std::size_t total)
      : nr_(g.nr()), nz_(g.nz()), blocks_(std::move(blocks)), total_(total) {
    w_.resize(static_cast<std::size_t>(nr_) * nz_);
    for (int j = 0; j < nz_; ++j)
      for (int i = 0; i < nr_; ++i) w_[i + static_cast<std::size_t>(nr_) * j] = g.cell_weight(i, j);
  }
  std::size_t cells() const override { return w_.size(); }
  const Vec& weights() const override { return w_; }

  void pair(const Vec& u, const Vec& v, Vec& s) const override {
    s.assign(w_.size(), 0.0);
    for_each_entry([&](std::size_t c, std::size_t k, double wt) { s[c] += wt * u[k] * v[k]; });
  }
  void pullback(const Vec& coef, const Vec& u, Vec& out) const override {
    out.assign(total_, 0.0);
    for_each_entry([&](std::size_t c, std::size_t k, double wt) { out[k] += coef[c] * wt * u[k]; });
  }

 private:
  template <class F>
  void for_each_entry(F&& f) const {
    const std::size_t nr = nr_, nr1 = nr_ + 1;
    for (int j = 0; j < nz_; ++j)
      for (int i = 0; i < nr_; ++i) {
        const std::size_t c = i + nr * j;
        for (const Block& b : blocks_) {
          switch (b.loc) {
            case Loc::cell:
              f(c, b.offset + i + nr * j, 1.0);
              break;
            case Loc::redge:
              f(c, b.offset + i + nr * j, 0.5);
              f(c, b.offset + i + nr * (j + 1), 0.5);
              break;
            case Loc::zedge:
              f(c, b.offset + i + nr1 * j, 0.5);
              f(c, b.offset + (i + 1) + nr1 * j, 0.5);
              break;
            case Loc::node:
              f(c, b.offset + i + nr1 * j, 0.25);
              f(c, b.offset + (i + 1) + nr1 * j, 0.25);
              f(c, b.offset + i + nr1 * (j + 1), 0.25);
              f(c, b.offset + (i + 1) + nr1 * (j + 1), 0.25);
              break;
          }
        }
      }
  }

  int nr_, nz_;
  std::vector<Block> blocks_;
  std::size_t total_;
  Vec w_;
};

bool has_ac(MeridianClass c) { return c != MeridianClass::T; }
bool has_b(MeridianClass c) { return c != MeridianClass::S; }

Vec make_mask(const MeridianGrid& g, MeridianClass cls) {
  Vec m(g.dofs(), 0.0);
  const int nr = g.nr(), nz = g.nz();
  if (has_ac(cls)) {
    for (int j = 1; j < nz; ++j)
      for (int i = 0; i < nr; ++i) m[g.ia(i, j)] = 1.0;
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nr; ++i) m[g.ic(i, j)] = 1.0;
  }
  if (has_b(cls))
    for (int j = 1; j < nz; ++j)
      for (int i = 1; i < nr; ++i) m[g.ib(i, j)] = 1.0;
  return m;
}

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;
using EVec = Eigen::VectorXd;

}  // namespace

MeridianField sample_meridian(const MeridianGridSpec& gs, MeridianClass cls,
                              const std::function<Vec3(double, double)>& cyl) {
  const MeridianGrid g(gs);
  MeridianField m;
  m.grid = gs;
  m.cls = cls;
  m.dofs.assign(g.dofs(), 0.0);
  for (int j = 0; j <= g.nz(); ++j)
    for (int i = 0; i < g.nr(); ++i) m.dofs[g.ia(i, j)] = cyl(g.rh(i), g.z(j))[0];
  for (int j = 0; j <= g.nz(); ++j)
    for (int i = 0; i <= g.nr(); ++i) m.dofs[g.ib(i, j)] = cyl(g.r(i), g.z(j))[1];
  for (int j = 0; j < g.nz(); ++j)
    for (int i = 0; i <= g.nr(); ++i) m.dofs[g.ic(i, j)] = cyl(g.r(i), g.zh(j))[2];
  const Vec mask = make_mask(g, cls);
  for (std::size_t k = 0; k < m.dofs.size(); ++k) m.dofs[k] *= mask[k];
  return m;
}

struct MeridianDisc::Impl {
  SpMat C;           // curl_dofs x dofs
  SpMat G;           // dofs x potentials
  Vec mass_phi;      // lumped node mass of active potentials
  Vec mass_curl;     // lumped curl mass
  std::vector<std::size_t> act;  // active dof indices
  Eigen::SimplicialLDLT<SpMat> K;  // G^T M G
  Eigen::SimplicialLDLT<SpMat> H;  // Hodge Laplacian on active dofs
  Eigen::SimplicialLDLT<SpMat> Kw;  // G^T M D G, pattern analyzed once
  bool kw_analyzed = false;
  bool has_potentials = false;
  std::size_t ntheta = 0, ncr = 0, ncz = 0;
};

std::size_t MeridianDisc::curl_dofs() const {
  return impl_->ntheta + impl_->ncr + impl_->ncz;
}

std::size_t MeridianDisc::potential_size() const { return static_cast<std::size_t>(impl_->G.cols()); }

MeridianDisc::MeridianDisc(const MeridianGridSpec& gs, MeridianClass cls)
    : grid_(gs), cls_(cls), impl_(std::make_unique<Impl>()) {
  const MeridianGrid& g = grid_;
  const int nr = g.nr(), nz = g.nz();
  Impl& im = *impl_;
  im.ntheta = static_cast<std::size_t>(nr) * nz;
  im.ncr = static_cast<std::size_t>(nr + 1) * nz;
  im.ncz = static_cast<std::size_t>(nr) * (nz + 1);

  quad_ = std::make_unique<StaggeredQuadrature>(
      g,
      std::vector<StaggeredQuadrature::Block>{
          {Loc::redge, 0}, {Loc::node, g.na()}, {Loc::zedge, g.na() + g.nb()}},
      g.dofs());
  cquad_ = std::make_unique<StaggeredQuadrature>(
      g,
      std::vector<StaggeredQuadrature::Block>{
          {Loc::cell, 0}, {Loc::zedge, im.ntheta}, {Loc::redge, im.ntheta + im.ncr}},
      curl_dofs());

  mask_ = make_mask(g, cls);
  const Vec ones(g.dofs(), 1.0), cones(curl_dofs(), 1.0);
  quad_->pullback(quad_->weights(), ones, mass_);
  cquad_->pullback(cquad_->weights(), cones, im.mass_curl);
  for (double& m : mass_)
    if (m <= 0.0) m = 1.0;

  // Curl.
  std::vector<Trip> t;
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < nr; ++i) {
      const std::size_t row = i + static_cast<std::size_t>(nr) * j;
      t.emplace_back(row, g.ia(i, j + 1), 1.0 / g.dz(j));
      t.emplace_back(row, g.ia(i, j), -1.0 / g.dz(j));
      t.emplace_back(row, g.ic(i + 1, j), -1.0 / g.dr(i));
      t.emplace_back(row, g.ic(i, j), 1.0 / g.dr(i));
    }
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i <= nr; ++i) {
      const std::size_t row = im.ntheta + i + static_cast<std::size_t>(nr + 1) * j;
      t.emplace_back(row, g.ib(i, j + 1), -1.0 / g.dz(j));
      t.emplace_back(row, g.ib(i, j), 1.0 / g.dz(j));
    }
  for (int j = 0; j <= nz; ++j)
    for (int i = 0; i < nr; ++i) {
      const std::size_t row = im.ntheta + im.ncr + i + static_cast<std::size_t>(nr) * j;
      t.emplace_back(row, g.ib(i + 1, j), g.r(i + 1) / g.ar(i));
      t.emplace_back(row, g.ib(i, j), -g.r(i) / g.ar(i));
    }
  // Drop inert columns so the operator only sees active dofs.
  for (auto& tr : t)
    if (mask_[tr.col()] == 0.0) tr = Trip(tr.row(), tr.col(), 0.0);
  im.C.resize(static_cast<Eigen::Index>(curl_dofs()), static_cast<Eigen::Index>(g.dofs()));
  im.C.setFromTriplets(t.begin(), t.end());
  im.C.prune(0.0);

  // Potentials on nodes with i < nr, 0 < j < nz.
  im.has_potentials = has_ac(cls);
  const int np = im.has_potentials ? nr * (nz - 1) : 0;
  auto ip = [&](int i, int j) { return i + nr * (j - 1); };
  auto active_node = [&](int i, int j) { return i < nr && j > 0 && j < nz; };
  t.clear();
  if (im.has_potentials) {
    for (int j = 0; j <= nz; ++j)
      for (int i = 0; i < nr; ++i) {
        if (mask_[g.ia(i, j)] == 0.0) continue;
        if (active_node(i + 1, j)) t.emplace_back(g.ia(i, j), ip(i + 1, j), 1.0 / g.dr(i));
        if (active_node(i, j)) t.emplace_back(g.ia(i, j), ip(i, j), -1.0 / g.dr(i));
      }
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i <= nr; ++i) {
        if (mask_[g.ic(i, j)] == 0.0) continue;
        if (active_node(i, j + 1)) t.emplace_back(g.ic(i, j), ip(i, j + 1), 1.0 / g.dz(j));
        if (active_node(i, j)) t.emplace_back(g.ic(i, j), ip(i, j), -1.0 / g.dz(j));
      }
    im.mass_phi.assign(np, 0.0);
    for (int j = 1; j < nz; ++j)
      for (int i = 0; i < nr; ++i) {
        double m = 0.0;
        for (int dj = -1; dj <= 0; ++dj)
          for (int di = -1; di <= 0; ++di) {
            const int ci = i + di, cj = j + dj;
            if (ci >= 0 && ci < nr && cj >= 0 && cj < nz) m += 0.25 * g.cell_weight(ci, cj);
          }
        im.mass_phi[ip(i, j)] = m;
      }
  }
  im.G.resize(static_cast<Eigen::Index>(g.dofs()), np);
  im.G.setFromTriplets(t.begin(), t.end());

  Eigen::Map<const EVec> M(mass_.data(), static_cast<Eigen::Index>(mass_.size()));
  if (im.has_potentials) {
    SpMat K = im.G.transpose() * M.asDiagonal() * im.G;
    im.K.compute(K);
    if (im.K.info() != Eigen::Success) throw std::runtime_error("MeridianDisc: potential factorization failed");
  }

  // Hodge Laplacian C^T Mc C + M G Mphi^-1 G^T M on active dofs.
  for (std::size_t k = 0; k < mask_.size(); ++k)
    if (mask_[k] != 0.0) im.act.push_back(k);
  std::vector<Trip> st;
  for (std::size_t a = 0; a < im.act.size(); ++a) st.emplace_back(im.act[a], a, 1.0);
  SpMat S(static_cast<Eigen::Index>(g.dofs()), static_cast<Eigen::Index>(im.act.size()));
  S.setFromTriplets(st.begin(), st.end());
  Eigen::Map<const EVec> Mc(im.mass_curl.data(), static_cast<Eigen::Index>(im.mass_curl.size()));
  SpMat CS = im.C * S;
  SpMat H = CS.transpose() * Mc.asDiagonal() * CS;
  if (im.has_potentials) {
    EVec inv_mphi(np);
    for (int k = 0; k < np; ++k) inv_mphi[k] = 1.0 / im.mass_phi[k];
    SpMat D = im.G.transpose() * M.asDiagonal() * S;  // potentials x active
    H += SpMat(D.transpose() * inv_mphi.asDiagonal() * D);
  }
  im.H.compute(H);
  if (im.H.info() != Eigen::Success) throw std::runtime_error("MeridianDisc: Hodge factorization failed");
}

MeridianDisc::~MeridianDisc() = default;

void MeridianDisc::curl(const Vec& u, Vec& out) const {
  out.resize(curl_dofs());
  Eigen::Map<const EVec> U(u.data(), static_cast<Eigen::Index>(u.size()));
  Eigen::Map<EVec> O(out.data(), static_cast<Eigen::Index>(out.size()));
  O.noalias() = impl_->C * U;
}

void MeridianDisc::curl_transpose(const Vec& c, Vec& out) const {
  out.resize(dofs());
  Eigen::Map<const EVec> Cv(c.data(), static_cast<Eigen::Index>(c.size()));
  Eigen::Map<EVec> O(out.data(), static_cast<Eigen::Index>(out.size()));
  O.noalias() = impl_->C.transpose() * Cv;
}

void MeridianDisc::gradient(const Vec& phi, Vec& out) const {
  out.resize(dofs());
  Eigen::Map<const EVec> P(phi.data(), static_cast<Eigen::Index>(phi.size()));
  Eigen::Map<EVec> O(out.data(), static_cast<Eigen::Index>(out.size()));
  O.noalias() = impl_->G * P;
}

void MeridianDisc::project_W(Vec& f) const {
  if (!impl_->has_potentials) {
    std::fill(f.begin(), f.end(), 0.0);
    return;
  }
  EVec mf(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) mf[k] = mass_[k] * mask_[k] * f[k];
  const EVec rhs = impl_->G.transpose() * mf;
  const EVec phi = impl_->K.solve(rhs);
  Eigen::Map<EVec> O(f.data(), static_cast<Eigen::Index>(f.size()));
  O.noalias() = impl_->G * phi;
}

void MeridianDisc::project_V(Vec& f) const {
  Vec w = f;
  project_W(w);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = mask_[k] * (f[k] - w[k]);
}

void MeridianDisc::grad_div(Vec& f) const {
  if (!impl_->has_potentials) {
    std::fill(f.begin(), f.end(), 0.0);
    return;
  }
  EVec mf(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) mf[k] = mass_[k] * mask_[k] * f[k];
  EVec q = impl_->G.transpose() * mf;
  for (Eigen::Index k = 0; k < q.size(); ++k) q[k] /= impl_->mass_phi[k];
  Eigen::Map<EVec> O(f.data(), static_cast<Eigen::Index>(f.size()));
  O.noalias() = impl_->G * q;
}

void MeridianDisc::precondition(Vec& g) const {
  const auto& act = impl_->act;
  EVec rhs(static_cast<Eigen::Index>(act.size()));
  for (std::size_t a = 0; a < act.size(); ++a) rhs[a] = mass_[act[a]] * g[act[a]];
  const EVec x = impl_->H.solve(rhs);
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t a = 0; a < act.size(); ++a) g[act[a]] = x[a];
  project_V(g);
}

bool MeridianDisc::newton_project_W(const Vec& u, double q, Vec& f) const {
  if (!impl_->has_potentials) {
    std::fill(f.begin(), f.end(), 0.0);
    return true;
  }
  Impl& im = *impl_;
  Vec s, coef, D;
  quad_->pair(u, u, s);
  const Vec& W = quad_->weights();
  coef.resize(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) coef[c] = s[c] > 0.0 ? W[c] * std::pow(s[c], 0.5 * q - 1.0) : 0.0;
  quad_->pullback(coef, Vec(u.size(), 1.0), D);
  double dmax = 0.0;
  for (double x : D) dmax = std::max(dmax, x);
  EVec md(static_cast<Eigen::Index>(D.size()));
  for (std::size_t k = 0; k < D.size(); ++k) md[k] = mask_[k] * (q - 1.0) * std::max(D[k], 1e-4 * dmax);
  const SpMat Kw = im.G.transpose() * md.asDiagonal() * im.G;
  if (!im.kw_analyzed) {
    im.Kw.analyzePattern(Kw);
    im.kw_analyzed = true;
  }
  im.Kw.factorize(Kw);
  if (im.Kw.info() != Eigen::Success) return false;
  EVec mf(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) mf[k] = mass_[k] * mask_[k] * f[k];
  const EVec phi = im.Kw.solve(EVec(im.G.transpose() * mf));
  Eigen::Map<EVec> O(f.data(), static_cast<Eigen::Index>(f.size()));
  O.noalias() = im.G * phi;
  return true;
}

}  // namespace pcurl
