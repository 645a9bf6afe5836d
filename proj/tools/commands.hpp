#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "pcurl/config.hpp"
#include "pcurl/report.hpp"

namespace pcurl::cli {

// Each command writes its files under out (created if missing), prints a
// summary to log and returns the process exit code.
int cmd_minimize(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_constants(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_verify(const Config& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_decompose(const Config& cfg, const std::filesystem::path& out, std::ostream& log);

// The identity checks behind cmd_verify.
std::vector<CheckRow> verify_rows(const RunConfig& rc);

struct ConstantsRow {
  double p = 0.0;
  double S_p = 0.0;       // bubble quadrature
  double S_p_plap = 0.0;  // radial p-Laplacian minimization
  double H_p = 0.0;
  double S_curl = 0.0;
  double S_O = 0.0, S_T = 0.0, S_S = 0.0;
  bool curl_gt_SH = false;     // S_curl > S_p H_p
  bool O_ge_curl = false;      // S^O >= S_curl
  bool O_le_4pi = true;        // S^O <= 4 pi (checked at p = 3/2 only)
  bool T_ge_O = false, S_ge_O = false;
};

ConstantsRow constants_row(const RunConfig& rc, double p);

}  // namespace pcurl::cli
