#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qbl/rng.hpp"
#include "qbl/spectra.hpp"
#include "qbl/sym_matrix.hpp"

namespace qbl {

/// Histogram of pooled, rescaled eigenvalues lambda / scale.
struct EmpiricalSpectralDist {
    std::vector<double> bin_edges;  // ascending, bins + 1 entries
    std::vector<double> masses;     // one per bin
    double underflow = 0.0;         // mass below bin_edges.front()
    double overflow = 0.0;          // mass above bin_edges.back()
    std::size_t n = 0;
    std::size_t samples_pooled = 0;
    double scale = 1.0;

    /// Empirical CDF at bin_edges[k].
    double cdf_at_edge(std::size_t k) const;
    /// Mass of bins lying inside [lo, hi]; lo and hi must be bin edges.
    double mass_between(double lo, double hi) const;
    double mass_outside(double radius) const;
};

/// sqrt(n / 2). With off-diagonal variance 1/2 the spectrum of GOE(n) fills
/// [-2 sqrt(n/2), 2 sqrt(n/2)], so lambda / sqrt(n/2) follows the semicircle
/// on [-2, 2].
double semicircle_scale(std::size_t n) noexcept;

inline constexpr double kEsdRange = 3.5;

/// Pools every eigenvalue of every spectrum, divided by `scale` (<= 0 selects
/// semicircle_scale(n)), into `bins` equal bins on [-3.5, 3.5] plus
/// underflow/overflow. All spectra must have the same order; bins >= 10.
EmpiricalSpectralDist empirical_spectral_distribution(std::span<const Spectrum> samples, std::size_t bins,
                                                      double scale = -1.0);

/// CDF of (1 / 2 pi) sqrt(4 - x^2) on [-2, 2].
double semicircle_cdf(double x) noexcept;

/// Largest |F_emp - F_sc| over the bin edges (including underflow).
double ks_distance(const EmpiricalSpectralDist& esd);

/// |i+ - i-| / n at the default zero tolerance.
double index_imbalance(const SymMatrix& q);

struct GapEstimate {
    double epsilon = 0.0;
    double estimate = 0.0;  // P{sigma(Q) >= eps} or P{sigma(Q) >= eps ||Q||_F}
    double stderr_ = 0.0;   // sqrt(p (1 - p) / trials)
    std::size_t trials = 0;
    std::size_t hits = 0;   // trials with sigma(Q) >= threshold
    bool rescaled = false;
};

/// Monte Carlo gap probability for GOE(n); trial t draws SeedSpec{seed, t}.
/// trials >= 1000. `threads` does not affect the result.
GapEstimate gap_probability_mc(std::size_t n, double epsilon, std::size_t trials, std::uint64_t seed,
                               bool rescaled, std::size_t threads = 1);

/// Gamma((n+1)/2) / (Gamma(n/2) Gamma(1/2) Gamma(3/2)) for even n >= 2.
double c_n_exact(std::size_t n);

/// c_n / (sqrt(2n) / pi)
double c_n_asymptotic_ratio(std::size_t n);

}  // namespace qbl
