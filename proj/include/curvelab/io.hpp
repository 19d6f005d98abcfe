#pragma once

#include <string>

#include "curvelab/grid.hpp"

namespace curvelab {

// Binary field format: int64 nx, ny; f64 lx, ly, origin.x, origin.y;
// then nx*ny row-major f64 samples. Little-endian throughout.
void save_field(const ScalarField2D& f, const std::string& path);
ScalarField2D load_field(const std::string& path);

// Whole-file text helpers (throw std::runtime_error on failure).
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV export: header "x,y,value", one row per grid node.
std::string field_to_csv(const ScalarField2D& f);

// PGM (P2) export of a field, linearly mapped to 0..255.
std::string field_to_pgm(const ScalarField2D& f);

}  // namespace curvelab
