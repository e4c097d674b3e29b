#pragma once

// Slow reference computations used only by the tests.

#include <cstddef>
#include <optional>

#include "qbl/sym_matrix.hpp"

namespace qbl::testing {

/// Number of real common zeros in RP^2 of two ternary forms, by walking the
/// conic {q1 = 0} (parametrized from the Jacobi eigenvectors of Q1) and
/// counting sign changes of q2 along it. nullopt when q1 is singular or when
/// q2 comes too close to a tangency for the grid to decide.
std::optional<std::size_t> conic_intersection_count(const SymMatrix& q1, const SymMatrix& q2,
                                                    std::size_t grid = 20000);

/// Vol(band of angular radius r around a great circle) / Vol(S^2), by a 2-D
/// midpoint rule in spherical coordinates.
double band_fraction_quadrature(double r, std::size_t grid = 2000);

}  // namespace qbl::testing
