#include "qbl/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/parallel.hpp"

namespace qbl {

double EmpiricalSpectralDist::cdf_at_edge(std::size_t k) const {
    double c = underflow;
    for (std::size_t i = 0; i < k && i < masses.size(); ++i) c += masses[i];
    return c;
}

double EmpiricalSpectralDist::mass_between(double lo, double hi) const {
    constexpr double slack = 1e-9;
    double m = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (bin_edges[i] >= lo - slack && bin_edges[i + 1] <= hi + slack) m += masses[i];
    }
    return m;
}

double EmpiricalSpectralDist::mass_outside(double radius) const {
    // Bins straddling +-radius count as outside.
    return std::max(0.0, 1.0 - mass_between(-radius, radius));
}

double semicircle_scale(std::size_t n) noexcept { return std::sqrt(static_cast<double>(n) / 2.0); }

EmpiricalSpectralDist empirical_spectral_distribution(std::span<const Spectrum> samples, std::size_t bins,
                                                      double scale) {
    if (samples.empty()) throw InvalidArgument("empirical_spectral_distribution: no samples");
    if (bins < 10) throw InvalidArgument("empirical_spectral_distribution: need at least 10 bins");
    const std::size_t n = samples.front().order();
    for (const auto& s : samples) {
        if (s.order() != n) throw InvalidArgument("empirical_spectral_distribution: mixed matrix orders");
    }
    EmpiricalSpectralDist esd;
    esd.n = n;
    esd.samples_pooled = samples.size();
    esd.scale = scale > 0.0 ? scale : semicircle_scale(n);
    esd.bin_edges.resize(bins + 1);
    const double width = 2.0 * kEsdRange / static_cast<double>(bins);
    for (std::size_t k = 0; k <= bins; ++k) esd.bin_edges[k] = -kEsdRange + width * static_cast<double>(k);

    std::vector<std::size_t> counts(bins, 0);
    std::size_t under = 0, over = 0, total = 0;
    for (const auto& s : samples) {
        for (double lambda : s.eigenvalues) {
            const double x = lambda / esd.scale;
            ++total;
            if (x < -kEsdRange) {
                ++under;
            } else if (x >= kEsdRange) {
                ++over;
            } else {
                const auto k = static_cast<std::size_t>((x + kEsdRange) / width);
                ++counts[std::min(k, bins - 1)];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(total);
    esd.masses.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) esd.masses[k] = static_cast<double>(counts[k]) * inv;
    esd.underflow = static_cast<double>(under) * inv;
    esd.overflow = static_cast<double>(over) * inv;
    return esd;
}

double semicircle_cdf(double x) noexcept {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + (x * std::sqrt(4.0 - x * x) + 4.0 * std::asin(x / 2.0)) / (4.0 * std::numbers::pi);
}

double ks_distance(const EmpiricalSpectralDist& esd) {
    double d = 0.0;
    double cdf = esd.underflow;
    for (std::size_t k = 0; k < esd.bin_edges.size(); ++k) {
        d = std::max(d, std::abs(cdf - semicircle_cdf(esd.bin_edges[k])));
        if (k < esd.masses.size()) cdf += esd.masses[k];
    }
    return d;
}

double index_imbalance(const SymMatrix& q) {
    const Inertia in = inertia(q);
    const double diff = in.pos > in.neg ? static_cast<double>(in.pos - in.neg) : static_cast<double>(in.neg - in.pos);
    return diff / static_cast<double>(q.order());
}

GapEstimate gap_probability_mc(std::size_t n, double epsilon, std::size_t trials, std::uint64_t seed,
                               bool rescaled, std::size_t threads) {
    if (n == 0) throw InvalidArgument("gap_probability_mc: n must be >= 1");
    if (trials < 1000) throw InvalidArgument("gap_probability_mc: need at least 1000 trials");
    if (!(epsilon >= 0.0)) throw InvalidArgument("gap_probability_mc: epsilon must be nonnegative");
    std::vector<unsigned char> hit(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
        const SymMatrix q = sample_goe(n, SeedSpec{seed, t});
        const double threshold = rescaled ? epsilon * q.frobenius_norm() : epsilon;
        hit[t] = min_abs_eig(q) >= threshold ? 1 : 0;
    });
    GapEstimate g;
    g.epsilon = epsilon;
    g.trials = trials;
    g.rescaled = rescaled;
    for (unsigned char h : hit) g.hits += h;
    g.estimate = static_cast<double>(g.hits) / static_cast<double>(trials);
    g.stderr_ = std::sqrt(g.estimate * (1.0 - g.estimate) / static_cast<double>(trials));
    return g;
}

double c_n_exact(std::size_t n) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("c_n_exact: defined for even n >= 2");
    const double x = static_cast<double>(n);
    return std::exp(std::lgamma((x + 1.0) / 2.0) - std::lgamma(x / 2.0) - std::lgamma(0.5) - std::lgamma(1.5));
}

double c_n_asymptotic_ratio(std::size_t n) {
    return c_n_exact(n) / (std::sqrt(2.0 * static_cast<double>(n)) / std::numbers::pi);
}

}  // namespace qbl
