#include "vortexlab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "vortexlab/errors.hpp"
#include "vortexlab/grid.hpp"

namespace vortexlab::snapshot {

namespace {

static_assert(sizeof(double) == 8, "snapshot format requires 64-bit doubles");

constexpr char kMagic[4] = {'V', 'R', 'T', '1'};

void put_u32(std::string& buf, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

void put_samples(std::string& buf, const std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    buf.append(reinterpret_cast<const char*>(v.data()), v.size() * 8);
  } else {
    for (double d : v) put_f64(buf, d);
  }
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("snapshot: cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("snapshot: write failed: " + path);
}

struct Header {
  std::uint32_t n_points = 0;
  double side_length = 0.0;
  double time = 0.0;
  Kind kind = Kind::scalar;
};

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

Header read_header(std::ifstream& in, const std::string& path) {
  unsigned char raw[4 + 4 + 8 + 8 + 1];
  in.read(reinterpret_cast<char*>(raw), sizeof raw);
  if (!in) throw IoError("snapshot: truncated header: " + path);
  if (std::memcmp(raw, kMagic, 4) != 0) {
    throw IoError("snapshot: bad magic (not a VRT1 file): " + path);
  }
  Header h;
  h.n_points = get_u32(raw + 4);
  h.side_length = get_f64(raw + 8);
  h.time = get_f64(raw + 16);
  const unsigned char kind = raw[24];
  if (kind > 1) throw IoError("snapshot: unknown payload kind: " + path);
  h.kind = static_cast<Kind>(kind);
  return h;
}

void read_samples(std::ifstream& in, const std::string& path,
                  std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * 8));
    if (!in) throw IoError("snapshot: truncated payload: " + path);
  } else {
    std::vector<unsigned char> raw(v.size() * 8);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("snapshot: truncated payload: " + path);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = get_f64(raw.data() + 8 * i);
  }
}

std::string encode_header(const Grid& g, double time, Kind kind) {
  std::string buf;
  buf.append(kMagic, 4);
  put_u32(buf, g.n_points);
  put_f64(buf, g.side_length);
  put_f64(buf, time);
  buf.push_back(static_cast<char>(kind));
  return buf;
}

}  // namespace

void save(const ScalarField& f, const std::string& path) {
  std::string buf = encode_header(f.grid, f.time, Kind::scalar);
  put_samples(buf, f.values);
  write_file(path, buf);
}

void save(const VectorField& f, const std::string& path) {
  std::string buf = encode_header(f.grid, f.time, Kind::vector);
  put_samples(buf, f.x);
  put_samples(buf, f.y);
  write_file(path, buf);
}

Kind peek_kind(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open: " + path);
  return read_header(in, path).kind;
}

ScalarField load_scalar(const std::string& path, double dealias_fraction) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open: " + path);
  const Header h = read_header(in, path);
  if (h.kind != Kind::scalar) {
    throw IoError("snapshot: expected scalar payload: " + path);
  }
  ScalarField f(make_grid(h.n_points, h.side_length, dealias_fraction), h.time);
  read_samples(in, path, f.values);
  return f;
}

VectorField load_vector(const std::string& path, double dealias_fraction) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open: " + path);
  const Header h = read_header(in, path);
  if (h.kind != Kind::vector) {
    throw IoError("snapshot: expected vector payload: " + path);
  }
  VectorField f(make_grid(h.n_points, h.side_length, dealias_fraction), h.time);
  read_samples(in, path, f.x);
  read_samples(in, path, f.y);
  return f;
}

}  // namespace vortexlab::snapshot
