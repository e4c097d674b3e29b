#include "qbl/integral_geometry.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/parallel.hpp"

namespace qbl {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d normal_of(const SubsphereSpec& s) {
    const Eigen::Vector3d ez(0.0, 0.0, 1.0);
    return s.frame.size() == 0 ? ez : Eigen::Vector3d(s.frame * ez);
}

/// p(circle cap band) for a great circle with unit normal u and a band of
/// radius r around the great circle with unit normal w.
double circle_band_fraction(const Eigen::Vector3d& u, const Eigen::Vector3d& w, double r) {
    const double uw = u.dot(w);
    const double rho = std::sqrt(std::max(0.0, 1.0 - uw * uw));
    const double h = std::sin(r);
    if (rho <= h) return 1.0;
    return 4.0 * std::asin(h / rho) / (2.0 * kPi);
}

}  // namespace

SubsphereSpec SubsphereSpec::great_circle() { return SubsphereSpec{}; }

SubsphereSpec SubsphereSpec::equatorial_band(double radius) {
    SubsphereSpec s;
    s.band_radius = radius;
    return s;
}

void SubsphereSpec::validate() const {
    if (sub_dim > ambient_dim) throw InvalidArgument("SubsphereSpec: sub_dim exceeds ambient_dim");
    if (band_radius < 0.0 || band_radius > kPi / 2.0) {
        throw InvalidArgument("SubsphereSpec: band radius must lie in (0, pi/2]");
    }
    if (is_band() && sub_dim == ambient_dim) throw InvalidArgument("SubsphereSpec: band around the whole sphere");
    if (frame.size() != 0) {
        const auto d = static_cast<Eigen::Index>(ambient_dim + 1);
        if (frame.rows() != d || frame.cols() != d) throw InvalidArgument("SubsphereSpec: frame has wrong size");
    }
}

double sphere_volume(std::size_t k) {
    // Vol(S^k) = 2 pi / (k - 1) Vol(S^{k-2}), exact at k = 0.
    double v = (k % 2 == 0) ? 2.0 : 2.0 * kPi;
    for (std::size_t j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) v *= 2.0 * kPi / static_cast<double>(j - 1);
    return v;
}

double normalized_volume(const SubsphereSpec& spec) {
    spec.validate();
    if (!spec.is_band()) return 1.0;
    const std::size_t m = spec.ambient_dim;
    const std::size_t a = spec.sub_dim;
    const auto ca = static_cast<int>(a);
    const auto sb = static_cast<int>(m - a - 1);
    auto integrand = [ca, sb](double t) { return std::pow(std::cos(t), ca) * std::pow(std::sin(t), sb); };
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, spec.band_radius, 15, 1e-13);
    return sphere_volume(a) * sphere_volume(m - a - 1) * integral / sphere_volume(m);
}

IntegralGeometryCheck integral_geometry_check(const SubsphereSpec& a, const SubsphereSpec& b,
                                              std::size_t rotations, std::uint64_t seed, std::size_t threads) {
    a.validate();
    b.validate();
    if (rotations == 0) throw InvalidArgument("integral_geometry_check: need at least one rotation");
    if (a.ambient_dim != 2 || b.ambient_dim != 2) {
        throw UnsupportedConfiguration("integral_geometry_check: only S^2 configurations are supported");
    }
    if (a.dimension() + b.dimension() < a.ambient_dim) {
        throw InvalidArgument("integral_geometry_check: dimensions must satisfy a + b >= m");
    }
    const bool a_circle = !a.is_band() && a.sub_dim == 1;
    const bool b_circle = !b.is_band() && b.sub_dim == 1;
    const bool a_band = a.is_band() && a.sub_dim == 1;
    const bool b_band = b.is_band() && b.sub_dim == 1;
    if (!((a_circle && b_circle) || (a_circle && b_band) || (a_band && b_circle))) {
        throw UnsupportedConfiguration("integral_geometry_check: supported pairs are circle/circle and circle/band");
    }

    std::vector<double> samples(rotations);
    parallel_for(rotations, threads, [&](std::size_t r) {
        const Eigen::Matrix3d g = haar_rotation(3, SeedSpec{seed, r});
        const Eigen::Vector3d u = normal_of(a);
        const Eigen::Vector3d w = g * normal_of(b);
        if (a_circle && b_circle) {
            // Distinct great circles meet in two antipodal points.
            samples[r] = u.cross(w).norm() > 0.0 ? 2.0 / sphere_volume(0) : 1.0;
        } else if (a_circle) {
            samples[r] = circle_band_fraction(u, w, b.band_radius);
        } else {
            samples[r] = circle_band_fraction(w, u, a.band_radius);
        }
    });

    IntegralGeometryCheck out;
    const MeanStderr ms = mean_stderr(samples);
    out.lhs_estimate = ms.mean;
    out.lhs_stderr = ms.stderr_;
    out.rhs_exact = normalized_volume(a) * normalized_volume(b);
    out.rotations = rotations;
    return out;
}

}  // namespace qbl
