#pragma once

// Monte Carlo driver. Every trial has its own seed, so a report depends only
// on its config: not on thread count or scheduling.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbl/pencil.hpp"
#include "qbl/rng.hpp"

namespace qbl {

enum class ExperimentKind {
    betti_k1,         // b(X_R) / n for one GOE quadric
    betti_k2,         // b(X_R) / n for the intersection of two
    sigma_scaling,    // b(Sigma_W), count only
    cplusd,           // c_W + d_W
    rankd2,           // rk d_2
    semicircle,       // KS distance of the pooled ESD to the semicircle
    gap_slope,        // P{sigma(Q) >= eps}
    crofton,          // real roots of a GOE quadric on a Haar line
    mu_over_n,        // 4 mu_W / n
    index_imbalance,  // |i+ - i-| / n
};

const char* to_string(ExperimentKind k) noexcept;
ExperimentKind experiment_kind_from_string(const std::string& s);
std::vector<ExperimentKind> all_experiment_kinds();

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::betti_k1;
    std::vector<std::size_t> n_list;
    std::size_t trials = 100;
    std::uint64_t root_seed = kDefaultSeed;
    std::size_t threads = 0;  // 0: QBL_THREADS or hardware concurrency
    ScanParams scan{0, 1e-10, -1.0, ScanMethod::spectral};
    double zero_tol = -1.0;    // one-quadric inertia tolerance; < 0 is the default
    double epsilon = 0.02;     // gap_slope
    bool rescaled = false;     // gap_slope: threshold eps * ||Q||_F
    std::size_t bins = 200;    // semicircle
    std::size_t max_resamples = 100;
    bool record_time = false;  // fill `seconds`; off keeps reports byte-stable

    /// trials >= 1, n_list nonempty and strictly ascending, plus per-kind
    /// limits on n. Throws InvalidArgument.
    void validate() const;
};

/// Seed of trial t at order n: SeedSpec{root_seed, (n << 32) | t}. A resample
/// after a discard continues the same stream.
SeedSpec trial_seed(std::uint64_t root_seed, std::size_t n, std::size_t t) noexcept;

struct InvariantViolation {
    std::string check;  // antipodal, jump, mu_sandwich, alexander, smith
    std::size_t n = 0;
    SeedSpec seed;
};

struct ExperimentRow {
    std::size_t n = 0;
    std::size_t trials = 0;
    double mean = 0.0;
    double stderr_ = 0.0;  // sample stddev / sqrt(trials)
    // NaN where the kind does not produce the quantity.
    double mean_mu = 0.0;
    double mean_sigma_count = 0.0;
    double mean_cplusd = 0.0;
    double mean_rankd2 = 0.0;
    double mean_imbalance = 0.0;
    std::size_t discarded = 0;  // resamples after non-generic draws
    std::size_t failures = 0;   // trials lost to NumericFailure
    bool flagged = false;       // discarded or failures above 1% of trials
    double seconds = 0.0;       // 0 unless record_time
    std::map<std::string, double> extras;
};

struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string version;
    std::vector<ExperimentRow> rows;
    std::optional<ScalingFit> fit;  // sigma_scaling with >= 3 orders
    std::vector<InvariantViolation> violations;
    double wall_seconds = 0.0;  // 0 unless record_time
};

/// Throws NumericFailure (with the seed of the last failure) when more than
/// 1% of the trials at some n fail.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Least squares of log(mean) against log(n). Needs >= 3 distinct n and
/// positive means, else InvalidArgument.
ScalingFit scaling_fit(std::span<const std::size_t> n, std::span<const double> mean);
ScalingFit scaling_fit(std::span<const ExperimentRow> rows);

}  // namespace qbl
