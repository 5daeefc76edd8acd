#pragma once

#include "vortexlab/field.hpp"

namespace vortexlab {

/// Trapezoid quadrature on the periodic grid: h^2 * sum of samples (exact
/// trapezoid weights, all equal under periodicity). Linear in f.
double integrate(const ScalarField& f);

/// h^2 * sum a*b, the discrete L2 pairing used by the duality checks.
double inner_product(const ScalarField& a, const ScalarField& b);

/// (h^2 sum |f|^p)^(1/p) for finite p >= 1; max |f| when p is +infinity.
/// p < 1 is rejected.
double lp_norm(const ScalarField& f, double p);

/// Same, with |f| the pointwise Euclidean magnitude of the two components.
double lp_norm(const VectorField& f, double p);

double max_abs(const ScalarField& f);
double max_magnitude(const VectorField& f);

/// Lp norm of a - b restricted to the torus ball of given radius around
/// (center_x, center_y) (cells whose centers lie within the ball). The ball
/// must fit: radius in (0, side_length/2).
double local_lp_distance(const ScalarField& a, const ScalarField& b, double p,
                         double center_x, double center_y, double radius);
double local_lp_distance(const VectorField& a, const VectorField& b, double p,
                         double center_x, double center_y, double radius);

}  // namespace vortexlab
