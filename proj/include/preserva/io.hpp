// preserva: JSON serialization of matrices, channels, and bundles.
// SPDX-License-Identifier: MIT
//
// File formats (all JSON):
//   * matrix:  {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major.
//   * channel: {"d_in": k, "d_out": l, "kraus": [matrix, ...]} or
//              {"d_in": k, "d_out": l, "choi": matrix} (trace-normalized).
//   * populations: either a bare array [p0, p1, ...] or a diagonal matrix.
//   * bundle:  {"gamma_A": [...], "gamma_B": [...], "eps": x, "family":
//              "W"|"E", "deltas_A": [...], "deltas_B": [...]}.
//
// Errors: FileError for unreadable/unwritable paths, ParseError for invalid
// JSON, SchemaError for well-formed JSON with missing or ill-shaped fields.

#pragma once

#include <string>

#include "preserva/linalg.hpp"
#include "preserva/quantum.hpp"

namespace preserva {

struct EpltBundle {
  rvec gamma_a;
  rvec gamma_b;
  double eps = 0.0;
  rvec deltas_a;
  rvec deltas_b;
  std::string family;  // "W" | "E"
};

cmat load_matrix(const std::string& path);
void save_matrix(const std::string& path, const cmat& m);

QuantumChannel load_channel(const std::string& path);
void save_channel(const std::string& path, const QuantumChannel& ch);

// Thermal populations: accepts a bare array or a diagonal matrix; validates
// nonnegativity and unit sum (SchemaError otherwise).
rvec load_populations(const std::string& path);

EpltBundle load_bundle(const std::string& path);
void save_bundle(const std::string& path, const EpltBundle& b);

// Writes text to a file (FileError on failure); used for reports.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace preserva
