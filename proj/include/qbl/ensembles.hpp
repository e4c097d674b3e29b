#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "qbl/rng.hpp"
#include "qbl/sym_matrix.hpp"

namespace qbl {

/// GOE(n): independent centered Gaussians, variance 1 on the diagonal and
/// 1/2 off it. Density is proportional to exp(-tr(Q^2)/2).
SymMatrix sample_goe(std::size_t n, Rng& rng);
SymMatrix sample_goe(std::size_t n, SeedSpec seed);

/// Weyl quadric in n variables: c_ii ~ N(0,1), c_ij ~ N(0,2) for i < j.
/// Draws the same stream as sample_goe, so
/// form_to_matrix(sample_weyl_quadric(n, s)) == sample_goe(n, s).
QuadraticForm sample_weyl_quadric(std::size_t n, Rng& rng);
QuadraticForm sample_weyl_quadric(std::size_t n, SeedSpec seed);

/// Haar-distributed element of SO(m): QR of a Gaussian matrix with the sign
/// of R's diagonal moved into Q, then one column flipped if det = -1.
Eigen::MatrixXd haar_rotation(std::size_t m, Rng& rng);
Eigen::MatrixXd haar_rotation(std::size_t m, SeedSpec seed);

/// First k columns of a Haar rotation: a uniformly random orthonormal k-frame.
Eigen::MatrixXd haar_frame(std::size_t m, std::size_t k, Rng& rng);

}  // namespace qbl
