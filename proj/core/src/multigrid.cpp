#include "multigrid.hpp"

#include <stdexcept>

namespace pcurl::detail {

namespace {

inline int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }

}  // namespace

PeriodicMultigrid::PeriodicMultigrid(const GridSpec& g, const std::array<Vec, 3>& node_coef) {
  Level f;
  f.n = g.n;
  for (int a = 0; a < 3; ++a) f.ih2[a] = 1.0 / (g.h(a) * g.h(a));
  const std::size_t N = g.size();
  for (int a = 0; a < 3; ++a) {
    if (node_coef[a].size() != N) throw std::invalid_argument("PeriodicMultigrid: coefficient size");
    f.c[a].resize(N);
  }
  for (int k = 0; k < f.n[2]; ++k)
    for (int j = 0; j < f.n[1]; ++j)
      for (int i = 0; i < f.n[0]; ++i) {
        const std::size_t id = i + static_cast<std::size_t>(f.n[0]) * (j + static_cast<std::size_t>(f.n[1]) * k);
        const int nb[3][3] = {{wrap(i + 1, f.n[0]), j, k}, {i, wrap(j + 1, f.n[1]), k}, {i, j, wrap(k + 1, f.n[2])}};
        for (int a = 0; a < 3; ++a) {
          const std::size_t in =
              nb[a][0] + static_cast<std::size_t>(f.n[0]) * (nb[a][1] + static_cast<std::size_t>(f.n[1]) * nb[a][2]);
          f.c[a][id] = 0.5 * (node_coef[a][id] + node_coef[a][in]);
        }
      }
  lv_.push_back(std::move(f));

  for (;;) {
    const Level& F = lv_.back();
    bool can = true;
    for (int a = 0; a < 3; ++a) can = can && F.n[a] % 2 == 0 && F.n[a] >= 6;
    if (!can) break;
    Level C;
    for (int a = 0; a < 3; ++a) {
      C.n[a] = F.n[a] / 2;
      C.ih2[a] = 0.25 * F.ih2[a];
    }
    for (auto& c : C.c) c.assign(C.size(), 0.0);
    auto fid = [&](int i, int j, int k) {
      return wrap(i, F.n[0]) + static_cast<std::size_t>(F.n[0]) * (wrap(j, F.n[1]) + static_cast<std::size_t>(F.n[1]) * wrap(k, F.n[2]));
    };
    const double w[3] = {0.25, 0.5, 0.25};
    for (int K = 0; K < C.n[2]; ++K)
      for (int J = 0; J < C.n[1]; ++J)
        for (int I = 0; I < C.n[0]; ++I) {
          const std::size_t cid = I + static_cast<std::size_t>(C.n[0]) * (J + static_cast<std::size_t>(C.n[1]) * K);
          const int base[3] = {2 * I, 2 * J, 2 * K};
          for (int a = 0; a < 3; ++a) {
            const int t1 = (a + 1) % 3, t2 = (a + 2) % 3;
            double acc = 0.0;
            for (int d1 = -1; d1 <= 1; ++d1)
              for (int d2 = -1; d2 <= 1; ++d2) {
                int p0[3] = {base[0], base[1], base[2]};
                p0[t1] += d1;
                p0[t2] += d2;
                int p1[3] = {p0[0], p0[1], p0[2]};
                p1[a] += 1;
                const double c1 = F.c[a][fid(p0[0], p0[1], p0[2])];
                const double c2 = F.c[a][fid(p1[0], p1[1], p1[2])];
                acc += w[d1 + 1] * w[d2 + 1] * 2.0 * c1 * c2 / (c1 + c2);
              }
            C.c[a][cid] = acc;
          }
        }
    lv_.push_back(std::move(C));
  }

  for (Level& L : lv_) {
    L.diag.assign(L.size(), 0.0);
    for (int k = 0; k < L.n[2]; ++k)
      for (int j = 0; j < L.n[1]; ++j)
        for (int i = 0; i < L.n[0]; ++i) {
          const std::size_t id = i + static_cast<std::size_t>(L.n[0]) * (j + static_cast<std::size_t>(L.n[1]) * k);
          const std::size_t m[3] = {
              wrap(i - 1, L.n[0]) + static_cast<std::size_t>(L.n[0]) * (j + static_cast<std::size_t>(L.n[1]) * k),
              i + static_cast<std::size_t>(L.n[0]) * (wrap(j - 1, L.n[1]) + static_cast<std::size_t>(L.n[1]) * k),
              i + static_cast<std::size_t>(L.n[0]) * (j + static_cast<std::size_t>(L.n[1]) * wrap(k - 1, L.n[2]))};
          double d = 0.0;
          for (int a = 0; a < 3; ++a) d += (L.c[a][id] + L.c[a][m[a]]) * L.ih2[a];
          L.diag[id] = d;
        }
  }
}

void PeriodicMultigrid::apply(const Level& L, const Vec& x, Vec& y) const {
  y.assign(L.size(), 0.0);
  const int n0 = L.n[0], n1 = L.n[1], n2 = L.n[2];
  for (int k = 0; k < n2; ++k)
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const std::size_t id = i + static_cast<std::size_t>(n0) * (j + static_cast<std::size_t>(n1) * k);
        const std::size_t p[3] = {wrap(i + 1, n0) + static_cast<std::size_t>(n0) * (j + static_cast<std::size_t>(n1) * k),
                                  i + static_cast<std::size_t>(n0) * (wrap(j + 1, n1) + static_cast<std::size_t>(n1) * k),
                                  i + static_cast<std::size_t>(n0) * (j + static_cast<std::size_t>(n1) * wrap(k + 1, n2))};
        for (int a = 0; a < 3; ++a) {
          const double f = L.c[a][id] * L.ih2[a] * (x[id] - x[p[a]]);
          y[id] += f;
          y[p[a]] -= f;
        }
      }
}

void PeriodicMultigrid::smooth(const Level& L, const Vec& b, Vec& x, bool forward) const {
  const int n0 = L.n[0], n1 = L.n[1], n2 = L.n[2];
  const long long total = static_cast<long long>(L.size());
  for (long long t = 0; t < total; ++t) {
    const long long id = forward ? t : total - 1 - t;
    const int i = static_cast<int>(id % n0);
    const int j = static_cast<int>((id / n0) % n1);
    const int k = static_cast<int>(id / (static_cast<long long>(n0) * n1));
    auto at = [&](int ii, int jj, int kk) {
      return wrap(ii, n0) + static_cast<std::size_t>(n0) * (wrap(jj, n1) + static_cast<std::size_t>(n1) * wrap(kk, n2));
    };
    const std::size_t px = at(i + 1, j, k), mx = at(i - 1, j, k);
    const std::size_t py = at(i, j + 1, k), my = at(i, j - 1, k);
    const std::size_t pz = at(i, j, k + 1), mz = at(i, j, k - 1);
    const double s = b[id] + L.ih2[0] * (L.c[0][id] * x[px] + L.c[0][mx] * x[mx]) +
                     L.ih2[1] * (L.c[1][id] * x[py] + L.c[1][my] * x[my]) +
                     L.ih2[2] * (L.c[2][id] * x[pz] + L.c[2][mz] * x[mz]);
    x[id] = s / L.diag[id];
  }
}

void PeriodicMultigrid::cycle(std::size_t l, const Vec& b, Vec& x) const {
  const Level& L = lv_[l];
  x.assign(L.size(), 0.0);
  if (l + 1 == lv_.size()) {
    for (int s = 0; s < 40; ++s) {
      smooth(L, b, x, true);
      smooth(L, b, x, false);
    }
    return;
  }
  smooth(L, b, x, true);
  smooth(L, b, x, true);
  Vec r;
  apply(L, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];

  const Level& C = lv_[l + 1];
  const double w[3] = {0.25, 0.5, 0.25};
  auto fid = [&](int i, int j, int k) {
    return wrap(i, L.n[0]) + static_cast<std::size_t>(L.n[0]) * (wrap(j, L.n[1]) + static_cast<std::size_t>(L.n[1]) * wrap(k, L.n[2]));
  };
  Vec rc(C.size(), 0.0), ec;
  for (int K = 0; K < C.n[2]; ++K)
    for (int J = 0; J < C.n[1]; ++J)
      for (int I = 0; I < C.n[0]; ++I) {
        double acc = 0.0;
        for (int dk = -1; dk <= 1; ++dk)
          for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di)
              acc += w[di + 1] * w[dj + 1] * w[dk + 1] * r[fid(2 * I + di, 2 * J + dj, 2 * K + dk)];
        rc[I + static_cast<std::size_t>(C.n[0]) * (J + static_cast<std::size_t>(C.n[1]) * K)] = acc;
      }
  cycle(l + 1, rc, ec);
  auto cid = [&](int I, int J, int K) {
    return wrap(I, C.n[0]) + static_cast<std::size_t>(C.n[0]) * (wrap(J, C.n[1]) + static_cast<std::size_t>(C.n[1]) * wrap(K, C.n[2]));
  };
  for (int k = 0; k < L.n[2]; ++k)
    for (int j = 0; j < L.n[1]; ++j)
      for (int i = 0; i < L.n[0]; ++i) {
        const int I = i / 2, J = j / 2, K = k / 2;
        const int oi = i % 2, oj = j % 2, ok = k % 2;
        double v = 0.0;
        for (int a = 0; a <= oi; ++a)
          for (int bb = 0; bb <= oj; ++bb)
            for (int c = 0; c <= ok; ++c) v += ec[cid(I + a, J + bb, K + c)];
        x[fid(i, j, k)] += v / static_cast<double>((1 + oi) * (1 + oj) * (1 + ok));
      }
  smooth(L, b, x, false);
  smooth(L, b, x, false);
}

void PeriodicMultigrid::vcycle(const Vec& b, Vec& x) const { cycle(0, b, x); }

}  // namespace pcurl::detail
