// preserva: JSON serialization of matrices, channels, and bundles.
// SPDX-License-Identifier: MIT

#include "preserva/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "preserva/errors.hpp"

namespace preserva {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("FileError", "cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw validation_error("ParseError",
                           "'" + path + "' is not valid JSON: " + e.what());
  }
  return j;
}

void dump_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw validation_error("FileError", "cannot write '" + path + "'");
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw validation_error("FileError", "failed while writing '" + path + "'");
  }
}

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw validation_error("SchemaError", "'" + path + "': " + what);
}

cmat matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("entries")) {
    schema_fail(path, "matrix needs rows, cols, entries");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    schema_fail(path, "matrix rows/cols must be integers");
  }
  const int rows = j["rows"].get<int>();
  const int cols = j["cols"].get<int>();
  if (rows < 1 || cols < 1) schema_fail(path, "matrix dimensions must be >= 1");
  const json& e = j["entries"];
  if (!e.is_array() || static_cast<int>(e.size()) != rows * cols) {
    schema_fail(path, "matrix entries must hold rows*cols pairs");
  }
  cmat m(rows, cols);
  for (int k = 0; k < rows * cols; ++k) {
    const json& p = e[static_cast<size_t>(k)];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
        !p[1].is_number()) {
      schema_fail(path, "matrix entry " + std::to_string(k) +
                            " must be a [re, im] pair");
    }
    m(k / cols, k % cols) = complex(p[0].get<double>(), p[1].get<double>());
  }
  return m;
}

json matrix_to_json(const cmat& m) {
  json e = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      e.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

rvec real_vector_from_json(const json& j, const std::string& path,
                           const std::string& field) {
  if (!j.is_array() || j.empty()) {
    schema_fail(path, field + " must be a nonempty array");
  }
  rvec v(j.size());
  for (size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) {
      schema_fail(path, field + "[" + std::to_string(k) + "] must be a number");
    }
    v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
  }
  return v;
}

json real_vector_to_json(const rvec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

cmat load_matrix(const std::string& path) {
  return matrix_from_json(parse_file(path), path);
}

void save_matrix(const std::string& path, const cmat& m) {
  dump_file(path, matrix_to_json(m));
}

QuantumChannel load_channel(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object() || !j.contains("d_in") || !j.contains("d_out")) {
    schema_fail(path, "channel needs d_in and d_out");
  }
  if (!j["d_in"].is_number_integer() || !j["d_out"].is_number_integer()) {
    schema_fail(path, "channel d_in/d_out must be integers");
  }
  const int d_in = j["d_in"].get<int>();
  const int d_out = j["d_out"].get<int>();
  if (d_in < 1 || d_out < 1) schema_fail(path, "channel dimensions must be >= 1");
  if (j.contains("kraus")) {
    const json& ks = j["kraus"];
    if (!ks.is_array() || ks.empty()) {
      schema_fail(path, "channel kraus must be a nonempty array");
    }
    std::vector<cmat> ops;
    for (size_t k = 0; k < ks.size(); ++k) {
      cmat op = matrix_from_json(ks[k], path);
      if (op.rows() != d_out || op.cols() != d_in) {
        schema_fail(path, "kraus " + std::to_string(k) + " must be " +
                              std::to_string(d_out) + "x" +
                              std::to_string(d_in));
      }
      ops.push_back(std::move(op));
    }
    return QuantumChannel::from_kraus(std::move(ops));
  }
  if (j.contains("choi")) {
    return QuantumChannel::from_choi(matrix_from_json(j["choi"], path), d_in,
                                     d_out);
  }
  schema_fail(path, "channel needs a kraus list or a choi matrix");
}

void save_channel(const std::string& path, const QuantumChannel& ch) {
  json ks = json::array();
  for (const cmat& k : ch.kraus()) ks.push_back(matrix_to_json(k));
  dump_file(path, json{{"d_in", ch.d_in()},
                       {"d_out", ch.d_out()},
                       {"kraus", ks}});
}

rvec load_populations(const std::string& path) {
  const json j = parse_file(path);
  rvec pops;
  if (j.is_array()) {
    pops = real_vector_from_json(j, path, "populations");
  } else {
    const cmat m = matrix_from_json(j, path);
    if (m.rows() != m.cols()) schema_fail(path, "population matrix not square");
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (r != c && std::abs(m(r, c)) > kTolStructural) {
          schema_fail(path, "population matrix must be diagonal");
        }
      }
    }
    pops = m.diagonal().real();
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < pops.size(); ++i) {
    if (pops(i) < -1e-12) schema_fail(path, "populations must be nonnegative");
    sum += pops(i);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    schema_fail(path, "populations must sum to 1, got " + std::to_string(sum));
  }
  return pops;
}

EpltBundle load_bundle(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_object()) schema_fail(path, "bundle must be an object");
  for (const char* field : {"gamma_A", "gamma_B", "eps", "family"}) {
    if (!j.contains(field)) {
      schema_fail(path, std::string("bundle needs ") + field);
    }
  }
  EpltBundle b;
  b.gamma_a = real_vector_from_json(j["gamma_A"], path, "gamma_A");
  b.gamma_b = real_vector_from_json(j["gamma_B"], path, "gamma_B");
  if (!j["eps"].is_number()) schema_fail(path, "eps must be a number");
  b.eps = j["eps"].get<double>();
  if (!j["family"].is_string()) schema_fail(path, "family must be a string");
  b.family = j["family"].get<std::string>();
  if (b.family != "W" && b.family != "E") {
    schema_fail(path, "family must be \"W\" or \"E\"");
  }
  if (j.contains("deltas_A")) {
    b.deltas_a = real_vector_from_json(j["deltas_A"], path, "deltas_A");
  }
  if (j.contains("deltas_B")) {
    b.deltas_b = real_vector_from_json(j["deltas_B"], path, "deltas_B");
  }
  return b;
}

void save_bundle(const std::string& path, const EpltBundle& b) {
  json j{{"gamma_A", real_vector_to_json(b.gamma_a)},
         {"gamma_B", real_vector_to_json(b.gamma_b)},
         {"eps", b.eps},
         {"family", b.family}};
  if (b.deltas_a.size() > 0) j["deltas_A"] = real_vector_to_json(b.deltas_a);
  if (b.deltas_b.size() > 0) j["deltas_B"] = real_vector_to_json(b.deltas_b);
  dump_file(path, j);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw validation_error("FileError", "cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw validation_error("FileError", "failed while writing '" + path + "'");
  }
}

}  // namespace preserva
