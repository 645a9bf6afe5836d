#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

#include "pcurl/constraint.hpp"
#include "pcurl/diffops.hpp"
#include "pcurl/energy.hpp"
#include "pcurl/field_io.hpp"
#include "pcurl/minimizer.hpp"
#include "pcurl/oracles.hpp"
#include "pcurl/symmetry.hpp"

namespace pcurl::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

MeridianClass class_of(Symmetry s) {
  switch (s) {
    case Symmetry::T: return MeridianClass::T;
    case Symmetry::S: return MeridianClass::S;
    default: return MeridianClass::O;
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

CheckRow rel_row(const std::string& name, double expected, double got, double tol) {
  CheckRow r{name, expected, got, 0.0, false};
  r.rel_err = expected != 0.0 ? std::abs(got - expected) / std::abs(expected) : std::abs(got);
  r.pass = r.rel_err < tol;
  return r;
}

// Pass when got lies in [lo, hi]; rel_err is the distance outside the band.
CheckRow band_row(const std::string& name, double expected, double got, double lo, double hi) {
  CheckRow r{name, expected, got, 0.0, false};
  r.pass = got >= lo && got <= hi;
  r.rel_err = r.pass ? 0.0 : std::min(std::abs(got - lo), std::abs(got - hi));
  return r;
}

double max_abs(const VectorField3& u) {
  double m = 0.0;
  for (const auto& c : u.c)
    for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

double curl_identity_error(int n, double L) {
  const GridSpec g = GridSpec::cube(n, L);
  const LossYauParams prm;
  const VectorField3 u = sample_loss_yau(g, prm);
  const VectorField3 cu = curl(u, DiffMode::fd2);
  const VectorField3 ex = sample_loss_yau_curl(g, prm);
  return max_interior_diff(cu, ex, stencil_margin(DiffMode::fd2));
}

double ly_pde_residual(int n, double L, double wz) {
  const GridSpec g = GridSpec::cube(n, L);
  LossYauParams prm;
  prm.w = {0.0, 0.0, wz};
  return pde_residual(sample_loss_yau(g, prm), Exponents(1.5), DiffMode::fd2);
}

}  // namespace

std::vector<CheckRow> verify_rows(const RunConfig& rc) {
  std::vector<CheckRow> rows;
  const double e16 = 16.0 * kPi * kPi;

  const LossYauReport ly = verify_loss_yau(1.5, LossYauParams{});
  rows.push_back(rel_row("loss_yau_J", e16 / 3.0, ly.J, 1e-9));
  rows.push_back(rel_row("loss_yau_curl_integral", e16, ly.curl_integral, 1e-9));
  rows.push_back(rel_row("loss_yau_pstar_integral", e16, ly.pstar_integral, 1e-9));
  rows.push_back(rel_row("loss_yau_quotient", 4.0 * kPi, ly.quotient, 1e-9));
  rows.push_back(rel_row("loss_yau_coefficient", 1.0, ly.coefficient, 1e-12));
  rows.push_back(band_row("loss_yau_pointwise_defect", 0.0, ly.pointwise_defect, 0.0, 1e-8));
  {
    LossYauParams detuned;
    detuned.w = {0.0, 0.0, 1.0};
    const LossYauReport d = verify_loss_yau(1.5, detuned);
    rows.push_back(band_row("loss_yau_detuned_coefficient_gap", 0.0, std::abs(d.coefficient - 1.0), 0.1, INFINITY));
  }

  // Grid sweeps against the closed forms.
  {
    const double e32 = curl_identity_error(32, 8.0), e64 = curl_identity_error(64, 8.0),
                 e128 = curl_identity_error(128, 8.0);
    rows.push_back(band_row("curl_identity_ratio_32_64", 4.0, e32 / e64, 3.5, 4.5));
    rows.push_back(band_row("curl_identity_ratio_64_128", 4.0, e64 / e128, 3.5, 4.5));
  }
  {
    const double r32 = ly_pde_residual(32, 8.0, 4.0 / 3.0), r64 = ly_pde_residual(64, 8.0, 4.0 / 3.0);
    rows.push_back(band_row("pde_residual_order_32_64", 2.0, std::log2(r32 / r64), 1.5, 2.5));
    rows.push_back(band_row("pde_residual_detuned_64", 0.0, ly_pde_residual(64, 8.0, 1.0), 0.1, INFINITY));
  }

  for (double p : rc.p_list) {
    const std::string tag = "_p" + format_double(p);
    const BubbleSpReport b = bubble_S_p_report(p, 3);
    rows.push_back(rel_row("bubble_S_dilation" + tag, b.S, b.S_alt, 1e-8));
    const BubbleResidualReport fit = bubble_plap_residual(p, 3, 1.0);
    rows.push_back(band_row("bubble_residual" + tag, 0.0, fit.max_residual, 0.0, 1e-8));
    const BubbleResidualReport off = bubble_plap_residual(p, 3, 1.0, 2.0);
    rows.push_back(band_row("bubble_residual_detuned" + tag, 0.0, off.max_residual, 1e-2, INFINITY));
  }

  // Helmholtz split and the p* = 2 projection.
  {
    const GridSpec g = GridSpec::cube(32, 8.0);
    const VectorField3 u = sample_loss_yau(g, LossYauParams{});
    const HelmholtzSplit hs = helmholtz_split(u);
    rows.push_back(band_row("helmholtz_recompose", 0.0, max_abs(hs.v + hs.w - u) / max_abs(u), 0.0, 1e-13));
    double dv = 0.0;
    for (double x : div(hs.v).data) dv = std::max(dv, std::abs(x));
    rows.push_back(band_row("helmholtz_div_free", 0.0, dv / max_abs(u), 0.0, 1e-12));
    const FieldWvResult wv = w_of_v(u, Exponents(1.2), WvOptions{1e-12, 500, true});
    const double gap = max_abs(wv.w + hs.w) / max_abs(hs.w);
    rows.push_back(band_row("w_of_v_linear_split", 0.0, gap, 0.0, 1e-8));
  }

  // |grad |v|| = |grad v| for v = |v| e_0.
  {
    const GridSpec g = GridSpec::cube(24, 6.0);
    VectorField3 v(g);
    for (int k = 0; k < g.n[2]; ++k)
      for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
          const Vec3 x = g.node(i, j, k);
          v.c[0][g.index(i, j, k)] = 1.0 + std::exp(-(x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2]));
        }
    const GradAbsReport ga = grad_abs_check(v);
    rows.push_back(band_row("grad_abs_equality", 0.0, ga.max_abs_gap, 0.0, 1e-12));
  }
  return rows;
}

int cmd_verify(const Config& cfg, const fs::path& out, std::ostream& log) {
  const RunConfig rc = parse_run_config(cfg);
  fs::create_directories(out);
  std::vector<CheckRow> rows = verify_rows(rc);

  // Bit-exact field round trip through the output directory.
  {
    const VectorField3 u = random_divfree_bump(GridSpec::cube(16, 4.0), rc.seed);
    const fs::path tmp = out / "roundtrip.pcrl";
    save_field(tmp.string(), u, rc.p);
    double p_back = 0.0;
    const VectorField3 back = load_vector_field(tmp.string(), &p_back);
    bool same = back.spec == u.spec && p_back == rc.p;
    for (int a = 0; a < 3 && same; ++a)
      same = std::memcmp(back.c[a].data(), u.c[a].data(), u.c[a].size() * sizeof(double)) == 0;
    fs::remove(tmp);
    rows.push_back({"field_roundtrip", 1.0, same ? 1.0 : 0.0, same ? 0.0 : 1.0, same});
  }

  auto os = open_out(out / "verify.csv");
  write_verify_csv(os, cfg, rows);
  int failed = 0;
  for (const auto& r : rows) {
    log << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(36) << r.name
        << " expected=" << format_double(r.expected) << " got=" << format_double(r.got) << '\n';
    if (!r.pass) ++failed;
  }
  log << rows.size() - failed << '/' << rows.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

int cmd_minimize(const Config& cfg, const fs::path& out, std::ostream& log) {
  const RunConfig rc = parse_run_config(cfg);
  const Exponents e(rc.p);
  fs::create_directories(out);
  auto progress = [&](const IterationRecord& r) {
    if (r.iter % 10 == 0)
      log << "iter " << r.iter << " J=" << format_double(r.J) << " Q=" << format_double(r.Q)
          << " grad=" << r.grad_norm << '\n';
  };

  MinimizeReport rep;
  if (rc.symmetry != Symmetry::full) {
    const MeridianClass cls = class_of(rc.symmetry);
    const MeridianGridSpec& mg = rc.minimize.meridian;
    MeridianField init;
    if (rc.init == "auto" || rc.init == "loss_yau") {
      init = loss_yau_meridian(mg, cls);
    } else if (rc.init == "random") {
      init = random_meridian(mg, cls, rc.seed);
    } else {
      const FieldFile f = read_field_file(rc.init);
      if (f.meridian) {
        init = load_meridian(rc.init);
        if (init.cls != cls) throw std::invalid_argument("init file class does not match symmetry");
      } else {
        init = reduce(load_vector_field(rc.init), cls, mg);
      }
    }
    MeridianMinimum mm = meridian_minimize(init, e, rc.minimize, progress);
    save_meridian((out / "meridian.pcrl").string(), mm.field, rc.p);
    save_field((out / "field.pcrl").string(), lift(mm.field, rc.grid), rc.p);
    rep = std::move(mm.report);
  } else {
    VectorField3 init;
    if (rc.init == "auto" || rc.init == "random")
      init = random_divfree_bump(rc.grid, rc.seed);
    else if (rc.init == "loss_yau")
      init = sample_loss_yau(rc.grid, LossYauParams{});
    else
      init = load_vector_field(rc.init);
    GroundState gs = minimize_ground_state(init, e, rc.minimize, progress);
    save_field((out / "field.pcrl").string(), gs.u, rc.p);
    rep = std::move(gs.report);
  }

  auto os = open_out(out / "minimize.csv");
  write_minimize_csv(os, cfg, rep);
  log << "J_final=" << format_double(rep.J_final) << " S_estimate=" << format_double(rep.S_estimate)
      << " iterations=" << rep.iterations << " stop=" << rep.stop_reason << '\n';
  return 0;
}

ConstantsRow constants_row(const RunConfig& rc, double p) {
  const Exponents e(p);
  ConstantsRow row;
  row.p = p;
  row.S_p = bubble_S_p(p, 3);
  row.S_p_plap = estimate_Sp(p, 3).plap;
  MinimizeOptions opts = rc.minimize;
  row.H_p = estimate_Hp(GridSpec::cube(rc.hp_n, rc.hp_L), e, opts).H;

  opts.symmetry = Symmetry::full;
  row.S_curl = minimize_ground_state(random_divfree_bump(rc.grid, rc.seed), e, opts).report.S_estimate;
  auto sym = [&](MeridianClass c) {
    return meridian_minimize(loss_yau_meridian(rc.minimize.meridian, c), e, opts).report.S_estimate;
  };
  row.S_O = sym(MeridianClass::O);
  row.S_T = sym(MeridianClass::T);
  row.S_S = sym(MeridianClass::S);

  row.curl_gt_SH = row.S_curl > row.S_p * row.H_p;
  row.O_ge_curl = row.S_O >= row.S_curl;
  if (p == 1.5) row.O_le_4pi = row.S_O <= 4.0 * kPi;
  row.T_ge_O = row.S_T >= row.S_O;
  row.S_ge_O = row.S_S >= row.S_O;
  return row;
}

int cmd_constants(const Config& cfg, const fs::path& out, std::ostream& log) {
  const RunConfig rc = parse_run_config(cfg);
  fs::create_directories(out);
  auto os = open_out(out / "constants.csv");
  write_config_header(os, cfg);
  os << "p,S_p,S_p_plap,H_p,S_curl,S_O,S_T,S_S,curl_gt_SH,O_ge_curl,O_le_4pi,T_ge_O,S_ge_O\n";
  auto tf = [](bool b) { return b ? "TRUE" : "FALSE"; };
  for (double p : rc.p_list) {
    const ConstantsRow r = constants_row(rc, p);
    os << format_double(r.p) << ',' << format_double(r.S_p) << ',' << format_double(r.S_p_plap) << ','
       << format_double(r.H_p) << ',' << format_double(r.S_curl) << ',' << format_double(r.S_O) << ','
       << format_double(r.S_T) << ',' << format_double(r.S_S) << ',' << tf(r.curl_gt_SH) << ','
       << tf(r.O_ge_curl) << ',' << tf(r.O_le_4pi) << ',' << tf(r.T_ge_O) << ',' << tf(r.S_ge_O) << '\n';
    char buf[256];
    std::snprintf(buf, sizeof buf, "p=%-5g S_p=%.6f (plap %.6f)  H_p=%.6f  S_curl=%.6f  S^O=%.6f  S^T=%.6f  S^S=%.6f\n",
                  r.p, r.S_p, r.S_p_plap, r.H_p, r.S_curl, r.S_O, r.S_T, r.S_S);
    log << buf << "  S_curl > S·H: " << tf(r.curl_gt_SH) << "   S^O >= S_curl: " << tf(r.O_ge_curl)
        << "   S^T >= S^O: " << tf(r.T_ge_O) << "   S^S >= S^O: " << tf(r.S_ge_O);
    if (p == 1.5) log << "   S^O <= 4pi: " << tf(r.O_le_4pi);
    log << '\n';
  }
  return 0;
}

int cmd_decompose(const Config& cfg, const fs::path& out, std::ostream& log) {
  const RunConfig rc = parse_run_config(cfg);
  if (rc.input.empty()) throw std::invalid_argument("decompose needs input=<field file>");
  fs::create_directories(out);
  double p_file = rc.p;
  const VectorField3 u = load_vector_field(rc.input, &p_file);
  const Exponents e(rc.p);

  const HelmholtzSplit hs = helmholtz_split(u);
  save_field((out / "v.pcrl").string(), hs.v, rc.p);
  save_field((out / "w.pcrl").string(), hs.w, rc.p);

  const FieldWvResult wv = w_of_v(hs.v, e, rc.minimize.wv);
  save_field((out / "w_nonlinear.pcrl").string(), wv.w, rc.p);
  save_field((out / "u_m.pcrl").string(), hs.v + wv.w, rc.p);

  const OComponents oc = o_components(u);
  save_field((out / "rho.pcrl").string(), oc.rho, rc.p);
  save_field((out / "tau.pcrl").string(), oc.tau, rc.p);
  save_field((out / "zeta.pcrl").string(), oc.zeta, rc.p);

  const double ps = e.p_star();
  log << "|u|_p*=" << format_double(lp_norm(u, ps)) << " |v|_p*=" << format_double(lp_norm(hs.v, ps))
      << " |w|_p*=" << format_double(lp_norm(hs.w, ps)) << '\n'
      << "w(v): iterations=" << wv.report.iterations << " residual=" << wv.report.m_residual
      << " converged=" << (wv.report.converged ? "yes" : "no") << '\n';
  return 0;
}

}  // namespace pcurl::cli
