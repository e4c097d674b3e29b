#pragma once

// Normalized volumes p(X) = Vol(X) / Vol(S^{dim X}) of simple subsets of
// spheres, and a Monte Carlo check on S^2 that the Haar average of
// p(A cap gB) equals p(A) p(B).

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace qbl {

/// The great subsphere S^a = S^m cap L for a linear subspace L of dimension
/// a + 1, or (band_radius > 0) its tube of angular radius r in S^m. `frame`
/// is an ambient rotation applied to the standard position, where L is
/// spanned by the first a + 1 coordinate axes.
struct SubsphereSpec {
    std::size_t ambient_dim = 2;
    std::size_t sub_dim = 1;
    double band_radius = 0.0;  // 0: the subsphere itself; else in (0, pi/2]
    Eigen::MatrixXd frame;     // empty means identity

    static SubsphereSpec great_circle();
    static SubsphereSpec equatorial_band(double radius);

    bool is_band() const noexcept { return band_radius > 0.0; }
    /// Dimension of the set itself: sub_dim, or ambient_dim for a band.
    std::size_t dimension() const noexcept { return is_band() ? ambient_dim : sub_dim; }
    void validate() const;
};

/// Vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2), by the two-step recurrence.
double sphere_volume(std::size_t k);

/// 1 for a subsphere. For a band: Vol(S^a) Vol(S^{m-a-1})
/// int_0^r cos^a t sin^{m-a-1} t dt / Vol(S^m), by Gauss-Kronrod quadrature.
double normalized_volume(const SubsphereSpec& spec);

struct IntegralGeometryCheck {
    double lhs_estimate = 0.0;  // mean of p(A cap gB) over Haar rotations g
    double lhs_stderr = 0.0;
    double rhs_exact = 0.0;     // p(A) p(B)
    std::size_t rotations = 0;
};

/// Supported on S^2: great circle with great circle (exact: two points, so
/// p = 2 / Vol(S^0) = 1 for every g), and great circle with band in either
/// order (closed-form arc length). Anything else throws
/// UnsupportedConfiguration. Rotation r draws from SeedSpec{seed, r}.
IntegralGeometryCheck integral_geometry_check(const SubsphereSpec& a, const SubsphereSpec& b,
                                              std::size_t rotations, std::uint64_t seed,
                                              std::size_t threads = 1);

}  // namespace qbl
