#include "qbl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/parallel.hpp"
#include "qbl/quadric.hpp"
#include "qbl/rmt.hpp"
#include "qbl/spectra.hpp"

namespace qbl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::betti_k1, "betti_k1"},
    {ExperimentKind::betti_k2, "betti_k2"},
    {ExperimentKind::sigma_scaling, "sigma_scaling"},
    {ExperimentKind::cplusd, "cplusd"},
    {ExperimentKind::rankd2, "rankd2"},
    {ExperimentKind::semicircle, "semicircle"},
    {ExperimentKind::gap_slope, "gap_slope"},
    {ExperimentKind::crofton, "crofton"},
    {ExperimentKind::mu_over_n, "mu_over_n"},
    {ExperimentKind::index_imbalance, "index_imbalance"},
};

bool uses_scan(ExperimentKind k) {
    return k == ExperimentKind::betti_k2 || k == ExperimentKind::cplusd || k == ExperimentKind::rankd2 ||
           k == ExperimentKind::mu_over_n;
}

struct Trial {
    double stat = kNaN;
    double mu = kNaN;
    double sigma = kNaN;
    double cplusd = kNaN;
    double rankd2 = kNaN;
    double imbalance = kNaN;
    // two-quadric cross-checks
    double closed_form = kNaN;
    double ledger = kNaN;
    bool constant = false;
    bool formula_mismatch = false;  // ledger != closed form
    bool e3_mismatch = false;       // rank_e3 != ledger

    std::size_t discards = 0;
    bool failed = false;
    std::vector<std::string> violations;
};

void one_quadric_trial(const ExperimentConfig& cfg, std::size_t n, Rng& rng, Trial& out) {
    for (std::size_t attempt = 0;; ++attempt) {
        if (attempt > cfg.max_resamples) throw NumericFailure("resample budget exhausted");
        const SymMatrix q = sample_goe(n, rng);
        const BettiResult b = betti_one_quadric(q, cfg.zero_tol);
        if (b.degenerate) {
            ++out.discards;
            continue;
        }
        const double dn = static_cast<double>(n);
        out.mu = static_cast<double>(b.mu);
        out.imbalance = std::abs(static_cast<double>(b.inertia.pos) - static_cast<double>(b.inertia.neg)) / dn;
        out.stat = cfg.kind == ExperimentKind::index_imbalance ? out.imbalance
                                                                : static_cast<double>(b.total_betti) / dn;
        if (b.total_betti > complex_betti_one_quadric(n - 1)) out.violations.emplace_back("smith");
        return;
    }
}

void pencil_trial(const ExperimentConfig& cfg, std::size_t n, Rng& rng, Trial& out) {
    for (std::size_t attempt = 0;; ++attempt) {
        if (attempt > cfg.max_resamples) throw NumericFailure("resample budget exhausted");
        SymMatrix q1 = sample_goe(n, rng);
        SymMatrix q2 = sample_goe(n, rng);
        std::optional<Pencil> p;
        try {
            p.emplace(std::move(q1), std::move(q2));
        } catch (const InvalidArgument&) {
            ++out.discards;
            continue;
        }

        if (cfg.kind == ExperimentKind::sigma_scaling) {
            out.sigma = static_cast<double>(spectral_variety_count(*p));
            out.stat = out.sigma;
            return;
        }

        const PencilScan scan = scan_index_function(*p, cfg.scan);
        if (scan.discarded) {
            ++out.discards;
            continue;
        }
        const TwoQuadricBetti b = betti_two_quadrics(scan);
        const double dn = static_cast<double>(n);
        out.mu = static_cast<double>(b.mu);
        out.sigma = static_cast<double>(b.sigma_count);
        out.cplusd = b.c_plus_d;
        out.rankd2 = b.rank_d2;
        out.closed_form = static_cast<double>(b.closed_form_raw) / dn;
        out.ledger = static_cast<double>(b.ledger_betti) / dn;
        out.constant = b.index_constant;
        out.formula_mismatch = b.ledger_betti != b.closed_form_raw;
        out.e3_mismatch = static_cast<long>(b.rank_e3) != b.ledger_betti;

        switch (cfg.kind) {
            case ExperimentKind::betti_k2: out.stat = static_cast<double>(b.rank_e3) / dn; break;
            case ExperimentKind::cplusd: out.stat = b.c_plus_d; break;
            case ExperimentKind::rankd2: out.stat = b.rank_d2; break;
            default: out.stat = 4.0 * static_cast<double>(b.mu) / dn; break;
        }

        if (scan.antipodal_violations != 0) out.violations.emplace_back("antipodal");
        if (!scan.jump_rule_holds()) out.violations.emplace_back("jump");
        if (!mu_sandwich_check(*p, scan)) out.violations.emplace_back("mu_sandwich");
        if (2 * scan.alexander_sum() != scan.sigma_count) out.violations.emplace_back("alexander");
        return;
    }
}

void crofton_trial(std::size_t n, Rng& rng, Trial& out) {
    const SymMatrix q = sample_goe(n, rng);
    const Eigen::MatrixXd line = haar_frame(n, 2, rng);
    out.stat = projective_line_root_count(q, line);
}

double mean_of(std::span<const Trial> trials, double Trial::*field) {
    std::vector<double> v;
    v.reserve(trials.size());
    for (const auto& t : trials) {
        if (!t.failed) v.push_back(t.*field);
    }
    if (v.empty() || std::isnan(v.front())) return kNaN;
    return mean_stderr(v).mean;
}

ExperimentRow trial_row(const ExperimentConfig& cfg, std::size_t n, std::size_t threads,
                        std::vector<InvariantViolation>& violations) {
    std::vector<Trial> trials(cfg.trials);
    parallel_for(cfg.trials, threads, [&](std::size_t t) {
        Rng rng(trial_seed(cfg.root_seed, n, t));
        Trial& out = trials[t];
        try {
            if (cfg.kind == ExperimentKind::betti_k1 || cfg.kind == ExperimentKind::index_imbalance) {
                one_quadric_trial(cfg, n, rng, out);
            } else if (cfg.kind == ExperimentKind::crofton) {
                crofton_trial(n, rng, out);
            } else {
                pencil_trial(cfg, n, rng, out);
            }
        } catch (const NumericFailure&) {
            out.failed = true;
        }
    });

    ExperimentRow row;
    row.n = n;
    std::vector<double> stat;
    stat.reserve(trials.size());
    std::optional<SeedSpec> last_failure;
    std::size_t constant = 0, formula_mismatch = 0, e3_mismatch = 0;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const Trial& tr = trials[t];
        row.discarded += tr.discards;
        if (tr.failed) {
            ++row.failures;
            last_failure = trial_seed(cfg.root_seed, n, t);
            continue;
        }
        stat.push_back(tr.stat);
        constant += tr.constant;
        formula_mismatch += tr.formula_mismatch;
        e3_mismatch += tr.e3_mismatch;
        for (const auto& v : tr.violations) violations.push_back({v, n, trial_seed(cfg.root_seed, n, t)});
    }
    if (static_cast<double>(row.failures) > 0.01 * static_cast<double>(cfg.trials)) {
        throw NumericFailure("run_experiment: " + std::to_string(row.failures) + " of " +
                                 std::to_string(cfg.trials) + " trials failed at n = " + std::to_string(n),
                             last_failure);
    }

    row.trials = stat.size();
    const MeanStderr ms = mean_stderr(stat);
    row.mean = ms.mean;
    row.stderr_ = ms.stderr_;
    row.mean_mu = mean_of(trials, &Trial::mu);
    row.mean_sigma_count = mean_of(trials, &Trial::sigma);
    row.mean_cplusd = mean_of(trials, &Trial::cplusd);
    row.mean_rankd2 = mean_of(trials, &Trial::rankd2);
    row.mean_imbalance = mean_of(trials, &Trial::imbalance);

    const double done = static_cast<double>(row.trials);
    if (uses_scan(cfg.kind)) {
        row.extras["constant_index_fraction"] = static_cast<double>(constant) / done;
        row.extras["constant_index_count"] = static_cast<double>(constant);
        row.extras["mean_closed_form_over_n"] = mean_of(trials, &Trial::closed_form);
        row.extras["mean_ledger_over_n"] = mean_of(trials, &Trial::ledger);
        row.extras["ledger_closed_form_mismatches"] = static_cast<double>(formula_mismatch);
        row.extras["e3_ledger_mismatches"] = static_cast<double>(e3_mismatch);
    }
    if (cfg.kind == ExperimentKind::crofton) row.extras["expected"] = std::numbers::sqrt2;
    return row;
}

ExperimentRow semicircle_row(const ExperimentConfig& cfg, std::size_t n, std::size_t threads) {
    std::vector<Spectrum> spectra(cfg.trials);
    parallel_for(cfg.trials, threads, [&](std::size_t t) {
        spectra[t] = eigenvalues(sample_goe(n, trial_seed(cfg.root_seed, n, t)));
    });
    const EmpiricalSpectralDist esd = empirical_spectral_distribution(spectra, cfg.bins);
    ExperimentRow row;
    row.n = n;
    row.trials = cfg.trials;
    row.mean = ks_distance(esd);
    row.stderr_ = kNaN;
    row.mean_mu = row.mean_sigma_count = row.mean_cplusd = row.mean_rankd2 = row.mean_imbalance = kNaN;
    row.extras["mass_outside_2.1"] = esd.mass_outside(2.1);
    row.extras["scale"] = esd.scale;
    return row;
}

ExperimentRow gap_row(const ExperimentConfig& cfg, std::size_t n, std::size_t threads) {
    const std::uint64_t seed = derive_seed(SeedSpec{cfg.root_seed, n}, 0).root_seed;
    const GapEstimate g = gap_probability_mc(n, cfg.epsilon, cfg.trials, seed, cfg.rescaled, threads);
    ExperimentRow row;
    row.n = n;
    row.trials = g.trials;
    row.mean = g.estimate;
    row.stderr_ = g.stderr_;
    row.mean_mu = row.mean_sigma_count = row.mean_cplusd = row.mean_rankd2 = row.mean_imbalance = kNaN;
    row.extras["epsilon"] = cfg.epsilon;
    row.extras["hits"] = static_cast<double>(g.hits);
    if (n % 2 == 0 && !cfg.rescaled) {
        const double ref = 2.0 * c_n_exact(n) * cfg.epsilon;
        row.extras["c_n"] = c_n_exact(n);
        row.extras["reference_2c_n_eps"] = ref;
        row.extras["slope_ratio"] = (1.0 - g.estimate) / ref;
        row.extras["slope_ratio_stderr"] = g.stderr_ / ref;
    }
    return row;
}

}  // namespace

const char* to_string(ExperimentKind k) noexcept {
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (const auto& [kind, name] : kKindNames) {
        if (s == name) return kind;
    }
    throw InvalidArgument("unknown experiment kind '" + s + "'");
}

std::vector<ExperimentKind> all_experiment_kinds() {
    std::vector<ExperimentKind> out;
    for (const auto& entry : kKindNames) out.push_back(entry.first);
    return out;
}

void ExperimentConfig::validate() const {
    if (trials == 0) throw InvalidArgument("ExperimentConfig: trials must be >= 1");
    if (n_list.empty()) throw InvalidArgument("ExperimentConfig: n_list is empty");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) throw InvalidArgument("ExperimentConfig: n_list must be strictly ascending");
    }
    if (n_list.back() >= (std::size_t{1} << 31)) throw InvalidArgument("ExperimentConfig: n too large");
    if (trials >= (std::size_t{1} << 32)) throw InvalidArgument("ExperimentConfig: too many trials");
    const bool needs_two = kind != ExperimentKind::semicircle && kind != ExperimentKind::gap_slope;
    if (needs_two && n_list.front() < 2) throw InvalidArgument("ExperimentConfig: this kind needs n >= 2");
    if (n_list.front() < 1) throw InvalidArgument("ExperimentConfig: n must be >= 1");
    if (kind == ExperimentKind::gap_slope && trials < 1000) {
        throw InvalidArgument("ExperimentConfig: gap_slope needs at least 1000 trials");
    }
    if (kind == ExperimentKind::gap_slope && !(epsilon >= 0.0)) {
        throw InvalidArgument("ExperimentConfig: epsilon must be nonnegative");
    }
    if (kind == ExperimentKind::semicircle && bins < 10) throw InvalidArgument("ExperimentConfig: bins must be >= 10");
    if (!(scan.refine_tol > 0.0)) throw InvalidArgument("ExperimentConfig: refine_tol must be positive");
}

SeedSpec trial_seed(std::uint64_t root_seed, std::size_t n, std::size_t t) noexcept {
    return SeedSpec{root_seed, (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(t)};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const std::size_t threads = resolve_threads(cfg.threads);

    ExperimentReport report;
    report.config = cfg;
    report.version = QBL_VERSION;
    for (std::size_t n : cfg.n_list) {
        const auto row_start = clock::now();
        ExperimentRow row;
        switch (cfg.kind) {
            case ExperimentKind::semicircle: row = semicircle_row(cfg, n, threads); break;
            case ExperimentKind::gap_slope: row = gap_row(cfg, n, threads); break;
            default: row = trial_row(cfg, n, threads, report.violations); break;
        }
        row.flagged = static_cast<double>(row.discarded + row.failures) > 0.01 * static_cast<double>(cfg.trials);
        if (cfg.record_time) row.seconds = std::chrono::duration<double>(clock::now() - row_start).count();
        report.rows.push_back(std::move(row));
    }
    if (cfg.kind == ExperimentKind::sigma_scaling && report.rows.size() >= 3) {
        report.fit = scaling_fit(report.rows);
    }
    if (cfg.record_time) report.wall_seconds = std::chrono::duration<double>(clock::now() - start).count();
    return report;
}

ScalingFit scaling_fit(std::span<const std::size_t> n, std::span<const double> mean) {
    if (n.size() != mean.size()) throw InvalidArgument("scaling_fit: size mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] == 0) throw InvalidArgument("scaling_fit: n must be positive");
        if (!(mean[i] > 0.0)) throw InvalidArgument("scaling_fit: means must be positive");
        x.push_back(std::log(static_cast<double>(n[i])));
        y.push_back(std::log(mean[i]));
    }
    std::vector<std::size_t> distinct(n.begin(), n.end());
    std::sort(distinct.begin(), distinct.end());
    if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 3) {
        throw InvalidArgument("scaling_fit: need at least 3 distinct n");
    }
    const double k = static_cast<double>(x.size());
    const double mx = pairwise_sum(x) / k, my = pairwise_sum(y) / k;
    std::vector<double> sxy(x.size()), sxx(x.size()), syy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy[i] = (x[i] - mx) * (y[i] - my);
        sxx[i] = (x[i] - mx) * (x[i] - mx);
        syy[i] = (y[i] - my) * (y[i] - my);
    }
    const double cxy = pairwise_sum(sxy), cxx = pairwise_sum(sxx), cyy = pairwise_sum(syy);
    ScalingFit fit;
    fit.exponent = cxy / cxx;
    fit.intercept = my - fit.exponent * mx;
    fit.r2 = cyy > 0.0 ? cxy * cxy / (cxx * cyy) : 1.0;
    return fit;
}

ScalingFit scaling_fit(std::span<const ExperimentRow> rows) {
    std::vector<std::size_t> n;
    std::vector<double> mean;
    for (const auto& r : rows) {
        n.push_back(r.n);
        mean.push_back(r.mean);
    }
    return scaling_fit(n, mean);
}

}  // namespace qbl
