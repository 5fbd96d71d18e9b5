// preserva: deterministic JSON report writer.
// SPDX-License-Identifier: MIT

#include "preserva/report.hpp"

#include <cmath>
#include <cstdio>

namespace preserva {

#ifndef PRESERVA_GIT_DESCRIBE
#define PRESERVA_GIT_DESCRIBE "unknown"
#endif

std::string fmt_json_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!needs_comma_.empty()) {
    if (needs_comma_.back()) out_ += ",";
    needs_comma_.back() = true;
  }
}

void JsonWriter::begin_object() {
  separate();
  out_ += "{";
  needs_comma_.push_back(false);
}

void JsonWriter::end_object() {
  needs_comma_.pop_back();
  out_ += "}";
}

void JsonWriter::begin_array() {
  separate();
  out_ += "[";
  needs_comma_.push_back(false);
}

void JsonWriter::end_array() {
  needs_comma_.pop_back();
  out_ += "]";
}

void JsonWriter::key(const std::string& k) {
  separate();
  out_ += "\"" + escape(k) + "\":";
  pending_key_ = true;
}

void JsonWriter::number(double v) {
  separate();
  out_ += fmt_json_number(v);
}

void JsonWriter::integer(long long v) {
  separate();
  out_ += std::to_string(v);
}

void JsonWriter::string(const std::string& s) {
  separate();
  out_ += "\"" + escape(s) + "\"";
}

void JsonWriter::boolean(bool b) {
  separate();
  out_ += b ? "true" : "false";
}

void JsonWriter::null() {
  separate();
  out_ += "null";
}

void JsonWriter::field(const std::string& k, double v) {
  key(k);
  number(v);
}
void JsonWriter::field(const std::string& k, int v) {
  key(k);
  integer(v);
}
void JsonWriter::field(const std::string& k, long long v) {
  key(k);
  integer(v);
}
void JsonWriter::field(const std::string& k, const std::string& v) {
  key(k);
  string(v);
}
void JsonWriter::field(const std::string& k, const char* v) {
  key(k);
  string(std::string(v));
}
void JsonWriter::field(const std::string& k, bool v) {
  key(k);
  boolean(v);
}

void begin_report(JsonWriter& w, const std::string& kind) {
  w.begin_object();
  w.field("report_version", 1);
  w.field("kind", kind);
  w.field("tool", "preserva");
  w.field("build", PRESERVA_GIT_DESCRIBE);
}

}  // namespace preserva
