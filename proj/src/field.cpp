#include "vortexlab/field.hpp"

#include <cmath>
#include <string>

#include "vortexlab/errors.hpp"

namespace vortexlab {

void require_finite(const std::vector<double>& values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(std::string(what) + ": non-finite value at index " +
                            std::to_string(i));
    }
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw ValidationError(std::string(what) + ": grid mismatch (" +
                          std::to_string(a.n_points) + "/" +
                          std::to_string(a.side_length) + " vs " +
                          std::to_string(b.n_points) + "/" +
                          std::to_string(b.side_length) + ")");
  }
}

}  // namespace vortexlab
