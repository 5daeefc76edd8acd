#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vortexlab::jsonw {

/// Deterministic JSON emitter: keys appear in insertion order, doubles are
/// printed with "%.17g" (lossless round-trip), output is stable
/// byte-for-byte for identical inputs. Non-finite doubles are rejected
/// (reports must never contain them).
class Writer {
 public:
  Writer& begin_object();
  Writer& end_object();
  Writer& begin_array();
  Writer& end_array();
  Writer& key(const std::string& k);

  Writer& value(double v);
  Writer& value(std::int64_t v);
  Writer& value(std::uint64_t v);
  Writer& value(std::uint32_t v) { return value(static_cast<std::uint64_t>(v)); }
  Writer& value(int v) { return value(static_cast<std::int64_t>(v)); }
  Writer& value(bool v);
  Writer& value(const std::string& v);
  Writer& value(const char* v) { return value(std::string(v)); }
  Writer& null();

  template <typename T>
  Writer& kv(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }
  Writer& array(const std::string& k, const std::vector<double>& v);

  /// Finished document (call after the outermost end). Appends a trailing
  /// newline.
  std::string str() const;

 private:
  void comma_if_needed();
  void indent();

  std::string out_;
  std::vector<bool> has_items_;  // per open container
  bool pending_key_ = false;
};

/// "%.17g" with a normalization quirk ironed out: always contains the same
/// bytes for the same bits.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace vortexlab::jsonw
