#include "vortexlab/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vortexlab/errors.hpp"

namespace vortexlab::jsonw {

std::string format_double(double v) {
  if (!std::isfinite(v)) {
    throw ValidationError("json: non-finite double cannot be serialized");
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Writer::comma_if_needed() {
  if (pending_key_) return;
  if (!has_items_.empty()) {
    if (has_items_.back()) out_ += ',';
    has_items_.back() = true;
    out_ += '\n';
    indent();
  }
}

void Writer::indent() {
  out_.append(2 * has_items_.size(), ' ');
}

Writer& Writer::begin_object() {
  comma_if_needed();
  pending_key_ = false;
  out_ += '{';
  has_items_.push_back(false);
  return *this;
}

Writer& Writer::end_object() {
  const bool had = has_items_.back();
  has_items_.pop_back();
  if (had) {
    out_ += '\n';
    indent();
  }
  out_ += '}';
  return *this;
}

Writer& Writer::begin_array() {
  comma_if_needed();
  pending_key_ = false;
  out_ += '[';
  has_items_.push_back(false);
  return *this;
}

Writer& Writer::end_array() {
  const bool had = has_items_.back();
  has_items_.pop_back();
  if (had) {
    out_ += '\n';
    indent();
  }
  out_ += ']';
  return *this;
}

Writer& Writer::key(const std::string& k) {
  comma_if_needed();
  out_ += '"';
  for (char c : k) {
    if (c == '"' || c == '\\') out_ += '\\';
    out_ += c;
  }
  out_ += "\": ";
  pending_key_ = true;
  return *this;
}

Writer& Writer::value(double v) {
  comma_if_needed();
  pending_key_ = false;
  out_ += format_double(v);
  return *this;
}

Writer& Writer::value(std::int64_t v) {
  comma_if_needed();
  pending_key_ = false;
  out_ += std::to_string(v);
  return *this;
}

Writer& Writer::value(std::uint64_t v) {
  comma_if_needed();
  pending_key_ = false;
  out_ += std::to_string(v);
  return *this;
}

Writer& Writer::value(bool v) {
  comma_if_needed();
  pending_key_ = false;
  out_ += v ? "true" : "false";
  return *this;
}

Writer& Writer::value(const std::string& v) {
  comma_if_needed();
  pending_key_ = false;
  out_ += '"';
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\t': out_ += "\\t"; break;
      case '\r': out_ += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
  return *this;
}

Writer& Writer::null() {
  comma_if_needed();
  pending_key_ = false;
  out_ += "null";
  return *this;
}

Writer& Writer::array(const std::string& k, const std::vector<double>& v) {
  key(k);
  begin_array();
  for (double x : v) value(x);
  return end_array();
}

std::string Writer::str() const { return out_ + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

}  // namespace vortexlab::jsonw
