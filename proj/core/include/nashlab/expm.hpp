#pragma once

#include "nashlab/types.hpp"

namespace nashlab {

/// Dense matrix exponential by scaling and squaring with a diagonal [6/6]
/// Pade approximant. The squaring count s is the smallest with
/// ||A||_1 / 2^s <= 0.5, where the approximant error is below unit roundoff.
Matrix expm(const Matrix& a);

/// Number of squarings expm uses for a matrix with the given 1-norm.
int expm_squarings(double norm1);

}  // namespace nashlab
