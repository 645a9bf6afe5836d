#include "pcurl/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace pcurl {

static_assert(std::endian::native == std::endian::little,
              "PCRL I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'P', 'C', 'R', 'L'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kMeridianFlag = 0x80;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("PCRL: truncated header");
  return v;
}

}  // namespace

void write_field_file(const std::string& path, const FieldFile& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("PCRL: cannot open " + path + " for writing");
  const std::size_t n = static_cast<std::size_t>(f.dims[0]) * f.dims[1] * f.dims[2];
  if (f.components.empty() || f.components.size() > 3)
    throw std::invalid_argument("PCRL: component count must be 1..3");
  os.write(kMagic, 4);
  put<std::uint8_t>(os, kVersion);
  for (auto d : f.dims) put<std::uint32_t>(os, d);
  for (auto l : f.L) put<double>(os, l);
  put<double>(os, f.p);
  std::uint8_t nc = static_cast<std::uint8_t>(f.components.size());
  if (f.meridian) nc |= kMeridianFlag;
  put<std::uint8_t>(os, nc);
  if (f.meridian) {
    put<std::uint8_t>(os, f.meridian_class);
    put<double>(os, f.r_max);
    put<double>(os, f.z_half);
    put<double>(os, f.stretch_r);
    put<double>(os, f.stretch_z);
  }
  for (const auto& c : f.components) {
    if (c.size() != n) throw std::invalid_argument("PCRL: component length mismatch");
    os.write(reinterpret_cast<const char*>(c.data()),
             static_cast<std::streamsize>(n * sizeof(double)));
  }
  if (!os) throw std::runtime_error("PCRL: write failed for " + path);
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("PCRL: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("PCRL: bad magic in " + path);
  const auto ver = get<std::uint8_t>(is);
  if (ver != kVersion) throw std::runtime_error("PCRL: unsupported version");
  FieldFile f;
  for (auto& d : f.dims) d = get<std::uint32_t>(is);
  for (auto& l : f.L) l = get<double>(is);
  f.p = get<double>(is);
  std::uint8_t nc = get<std::uint8_t>(is);
  f.meridian = (nc & kMeridianFlag) != 0;
  nc &= static_cast<std::uint8_t>(~kMeridianFlag);
  if (nc < 1 || nc > 3) throw std::runtime_error("PCRL: bad component count");
  if (f.meridian) {
    f.meridian_class = get<std::uint8_t>(is);
    f.r_max = get<double>(is);
    f.z_half = get<double>(is);
    f.stretch_r = get<double>(is);
    f.stretch_z = get<double>(is);
  }
  const std::size_t n = static_cast<std::size_t>(f.dims[0]) * f.dims[1] * f.dims[2];
  if (n == 0 || n > (std::size_t{1} << 34)) throw std::runtime_error("PCRL: bad dims");
  f.components.assign(nc, Vec(n));
  for (auto& c : f.components) {
    is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("PCRL: truncated payload in " + path);
  }
  return f;
}

namespace {

FieldFile header_for(const GridSpec& g, double p) {
  FieldFile f;
  for (int a = 0; a < 3; ++a) {
    f.dims[a] = static_cast<std::uint32_t>(g.n[a]);
    f.L[a] = g.L[a];
  }
  f.p = p;
  return f;
}

GridSpec grid_from(const FieldFile& f) {
  if (f.meridian) throw std::runtime_error("PCRL: file holds a meridian field");
  GridSpec g;
  for (int a = 0; a < 3; ++a) {
    g.n[a] = static_cast<int>(f.dims[a]);
    g.L[a] = f.L[a];
  }
  g.validate();
  return g;
}

}  // namespace

void save_field(const std::string& path, const VectorField3& u, double p) {
  FieldFile f = header_for(u.spec, p);
  f.components = {u.c[0], u.c[1], u.c[2]};
  write_field_file(path, f);
}

void save_field(const std::string& path, const ScalarField& u, double p) {
  FieldFile f = header_for(u.spec, p);
  f.components = {u.data};
  write_field_file(path, f);
}

VectorField3 load_vector_field(const std::string& path, double* p) {
  FieldFile f = read_field_file(path);
  if (f.components.size() != 3) throw std::runtime_error("PCRL: expected a vector field in " + path);
  VectorField3 u(grid_from(f));
  for (int a = 0; a < 3; ++a) u.c[a] = std::move(f.components[a]);
  if (p) *p = f.p;
  return u;
}

ScalarField load_scalar_field(const std::string& path, double* p) {
  FieldFile f = read_field_file(path);
  if (f.components.size() != 1) throw std::runtime_error("PCRL: expected a scalar field in " + path);
  ScalarField s(grid_from(f));
  s.data = std::move(f.components[0]);
  if (p) *p = f.p;
  return s;
}

}  // namespace pcurl
