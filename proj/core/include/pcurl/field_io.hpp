#pragma once

#include <cstdint>
#include <string>

#include "pcurl/grid.hpp"

namespace pcurl {

// PCRL v1: "PCRL", version byte, u32 n[3], f64 L[3], f64 p, u8 ncomp,
// then ncomp blocks of f64 samples (x-fastest), all little-endian.
// Meridian files set bit 7 of ncomp and append a u8 class code and
// f64 R_max, f64 Z_half, f64 stretch_r, f64 stretch_z before the payload;
// their dims are (n_r + 1, n_z + 1, 1), one sample slot per meridian node.
struct FieldFile {
  std::array<std::uint32_t, 3> dims{};
  std::array<double, 3> L{};
  double p = 2.0;
  std::vector<Vec> components;
  bool meridian = false;
  std::uint8_t meridian_class = 0;
  double r_max = 0.0;
  double z_half = 0.0;
  double stretch_r = 0.0;
  double stretch_z = 0.0;
};

void write_field_file(const std::string& path, const FieldFile& f);
FieldFile read_field_file(const std::string& path);

void save_field(const std::string& path, const VectorField3& u, double p);
void save_field(const std::string& path, const ScalarField& u, double p);
// Throws unless the file holds 3 components.
VectorField3 load_vector_field(const std::string& path, double* p = nullptr);
ScalarField load_scalar_field(const std::string& path, double* p = nullptr);

}  // namespace pcurl
