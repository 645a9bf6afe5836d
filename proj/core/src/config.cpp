#include "pcurl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcurl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::defaults() {
  Config c;
  c.kv_ = {
      {"p", "1.5"},
      {"grid.n", "32"},
      {"grid.L", "8"},
      {"symmetry", "full"},
      {"init", "auto"},
      {"seed", "1"},
      {"max_outer", "300"},
      {"grad_tol", "1e-6"},
      {"eps_schedule", "1e-2,1e-3,1e-4,0"},
      {"renormalize_every", "1"},
      {"stagnation_window", "20"},
      {"stagnation_tol", "1e-8"},
      {"wv.tol", "1e-9"},
      {"wv.max_iter", "400"},
      {"wv.precond", "on"},
      {"meridian.nr", "64"},
      {"meridian.nz", "128"},
      {"meridian.R", "50"},
      {"meridian.Z", "50"},
      {"meridian.stretch_r", "4"},
      {"meridian.stretch_z", "4"},
      {"p_list", "1.5,2"},
      {"hp.n", "24"},
      {"hp.L", "6"},
      {"input", ""},
  };
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!kv_.empty() && !kv_.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  kv_[key] = value;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::string Config::env_name(const std::string& key) {
  std::string s = "PCURL_";
  for (char ch : key) s += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

void Config::load_env() {
  for (auto& [k, v] : kv_)
    if (const char* e = std::getenv(env_name(k).c_str())) v = e;
}

const std::string& Config::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw std::invalid_argument("missing config key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string& s = get(key);
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw std::invalid_argument("config '" + key + "': not a number: " + s);
  return v;
}

long long Config::get_int(const std::string& key) const {
  const std::string& s = get(key);
  std::size_t pos = 0;
  long long v;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw std::invalid_argument("config '" + key + "': not an integer: " + s);
  return v;
}

bool Config::get_bool(const std::string& key) const {
  std::string s = get(key);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("config '" + key + "': not a flag: " + s);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size())
      throw std::invalid_argument("config '" + key + "': not a number list: " + get(key));
    out.push_back(v);
  }
  return out;
}

RunConfig parse_run_config(const Config& c) {
  RunConfig rc;
  rc.p = c.get_double("p");
  (void)Exponents(rc.p);
  const long long n = c.get_int("grid.n");
  if (n < 4 || n > 1024) throw std::invalid_argument("grid.n must be in [4, 1024]");
  rc.grid = GridSpec::cube(static_cast<int>(n), c.get_double("grid.L"));
  rc.grid.validate();
  rc.symmetry = parse_symmetry(c.get("symmetry"));
  rc.init = c.get("init");
  const long long seed = c.get_int("seed");
  if (seed < 0) throw std::invalid_argument("seed must be >= 0");
  rc.seed = static_cast<std::uint64_t>(seed);

  MinimizeOptions& m = rc.minimize;
  m.max_outer = static_cast<int>(c.get_int("max_outer"));
  m.grad_tol = c.get_double("grad_tol");
  m.eps_schedule = c.get_doubles("eps_schedule");
  m.symmetry = rc.symmetry;
  m.seed = rc.seed;
  m.renormalize_every = static_cast<int>(c.get_int("renormalize_every"));
  m.stagnation_window = static_cast<int>(c.get_int("stagnation_window"));
  m.stagnation_tol = c.get_double("stagnation_tol");
  m.wv.tol = c.get_double("wv.tol");
  m.wv.max_iter = static_cast<int>(c.get_int("wv.max_iter"));
  m.wv.precond = c.get_bool("wv.precond");
  m.meridian.nr = static_cast<int>(c.get_int("meridian.nr"));
  m.meridian.nz = static_cast<int>(c.get_int("meridian.nz"));
  m.meridian.R = c.get_double("meridian.R");
  m.meridian.Z = c.get_double("meridian.Z");
  m.meridian.stretch_r = c.get_double("meridian.stretch_r");
  m.meridian.stretch_z = c.get_double("meridian.stretch_z");
  m.validate();

  rc.p_list = c.get_doubles("p_list");
  for (double p : rc.p_list) (void)Exponents(p);
  rc.hp_n = static_cast<int>(c.get_int("hp.n"));
  rc.hp_L = c.get_double("hp.L");
  GridSpec::cube(rc.hp_n, rc.hp_L).validate();
  rc.input = c.get("input");
  return rc;
}

}  // namespace pcurl
