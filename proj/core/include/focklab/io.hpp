// io.hpp — Plain-text serialization: CSV tables (curves, grids) and JSON
// density matrices. Numbers print with fixed significant digits so identical
// inputs always serialize byte-identically.

#pragma once

#include "focklab/fock.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace focklab {

// One formatted double, "%.{sig}g".
std::string format_sig(double value, int sig);

// header joined by commas, then one row per line; 12 significant digits.
void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, int sig = 12);

// Density matrix as JSON: {"dims": [...], "re": [...], "im": [...]} with the
// matrix flattened row-major.
void write_density_json(std::ostream& out, const DensityMatrix& rho);
DensityMatrix read_density_json(std::istream& in);

}  // namespace focklab
