// preserva: deterministic JSON report writer.
// SPDX-License-Identifier: MIT
//
// Reports keep insertion order and render doubles with 12 significant
// digits; non-finite values are serialized as the strings "inf", "-inf",
// and "nan" so that reports stay valid JSON.

#pragma once

#include <string>
#include <vector>

namespace preserva {

// Formats with %.12g; non-finite values become quoted strings.
std::string fmt_json_number(double v);

// Minimal order-preserving JSON emitter.  Usage:
//   JsonWriter w;
//   w.begin_object();
//   w.key("value"); w.number(1.5);
//   w.end_object();
//   std::string text = w.str();
class JsonWriter {
 public:
  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(const std::string& k);
  void number(double v);
  void integer(long long v);
  void string(const std::string& s);
  void boolean(bool b);
  void null();

  // Convenience: key + scalar in one call.
  void field(const std::string& k, double v);
  void field(const std::string& k, int v);
  void field(const std::string& k, long long v);
  void field(const std::string& k, const std::string& v);
  void field(const std::string& k, const char* v);
  void field(const std::string& k, bool v);

  std::string str() const { return out_; }

 private:
  void separate();
  std::string out_;
  std::vector<bool> needs_comma_;
  bool pending_key_ = false;
};

// Opens a report object and writes the shared header fields
// (report_version, tool, build).  The caller closes the object.
void begin_report(JsonWriter& w, const std::string& kind);

}  // namespace preserva
