#pragma once

#include <string>

#include "vortexlab/field.hpp"

namespace vortexlab::snapshot {

/// Binary snapshot format (all multi-byte values little-endian):
///   magic "VRT1" | u32 n_points | f64 side_length | f64 time | u8 kind
///   | payload of f64 samples, row-major
/// kind 0 = scalar (n^2 samples), kind 1 = vector (x block then y block,
/// 2*n^2 samples). Round-trips bit-exactly.
enum class Kind : unsigned char { scalar = 0, vector = 1 };

void save(const ScalarField& f, const std::string& path);
void save(const VectorField& f, const std::string& path);

/// Reads just the header and reports the payload kind.
Kind peek_kind(const std::string& path);

/// Loaders. The format does not carry the dealias fraction, so the caller
/// provides it (run manifests record it; the default is the 2/3 rule).
ScalarField load_scalar(const std::string& path,
                        double dealias_fraction = 2.0 / 3.0);
VectorField load_vector(const std::string& path,
                        double dealias_fraction = 2.0 / 3.0);

}  // namespace vortexlab::snapshot
