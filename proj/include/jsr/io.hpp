#pragma once

// File formats: the JSON matrix-set schema, orbit-closure descriptions, CSV
// reports with 17 significant digits, atomic writes and a log-log SVG plot.
//
// Matrix-set schema:
//   {"d": 2, "matrices": [{"label": "A1", "rows": [[[re, im], ...], ...]}, ...]}
// Orbit-closure schema:
//   {"kind": "sturmian", "convergents": ["1/2", "2/3", ...]}
//   {"kind": "periodic", "alphabet": 2, "orbits": [[0, 1], ...]}

#include <string>
#include <utility>
#include <vector>

#include "jsr/bounds.hpp"
#include "jsr/matrix_set.hpp"
#include "jsr/symbolic.hpp"

namespace jsr {

// ParseError (with 1-based line/column) on malformed JSON, SchemaError naming
// the matrix label on shape problems, ValueError on non-finite entries.
MatrixSet parse_matrix_set(const std::string& text);
MatrixSet load_matrix_set(const std::string& path);

// Serialization that load_matrix_set reads back bit-exactly.
std::string emit_matrix_set(const MatrixSet& set);

OrbitClosure parse_orbit_closure(const std::string& text);
OrbitClosure load_orbit_closure(const std::string& path);

// Throws ValueError when the file cannot be read.
std::string read_file(const std::string& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file.
void write_atomic(const std::string& path, const std::string& content);

// "%.17g"; non-finite values print as "inf", "-inf" or "nan".
std::string format_number(double x);

inline constexpr const char* kBoundsCsvHeader =
    "n,rho_plus_n,rho_minus_n,best_lower,best_upper,gap,argmax_word_plus,argmax_word_minus";

std::string bounds_csv(const BoundsReport& report);

// Log-log polyline of (x, y) pairs with positive coordinates.
std::string loglog_svg(const std::vector<std::pair<double, double>>& points, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

}  // namespace jsr
