// qbl: sampling, single-instance analysis and Monte Carlo experiments for
// random real quadrics and their intersections.
//
// Exit codes: 0 ok, 2 usage error, 3 numeric failure, 4 failed --assert.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbl/ensembles.hpp"
#include "qbl/error.hpp"
#include "qbl/experiment.hpp"
#include "qbl/integral_geometry.hpp"
#include "qbl/pencil.hpp"
#include "qbl/quadric.hpp"
#include "qbl/report_io.hpp"
#include "qbl/rmt.hpp"
#include "qbl/spectra.hpp"

namespace {

using namespace qbl;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAssert = 4;

struct Common {
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string format = "csv";
    std::size_t grid = 0;
    double tol = -1.0;
    std::size_t threads = 0;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_literal(const std::string& arg) {
    if (arg.empty() || arg.front() != '@') return arg;
    std::ifstream in(arg.substr(1));
    if (!in) throw UsageError("cannot read matrix file '" + arg.substr(1) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double x, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) return;
    write_text_file(c.out, text);
}

SymMatrix matrix_or_sample(const std::string& literal, std::size_t n, Rng& rng) {
    if (!literal.empty()) return parse_matrix_literal(read_literal(literal));
    if (n == 0) throw UsageError("give --n or --matrix");
    return sample_goe(n, rng);
}

ScanParams scan_params(const Common& c, const std::string& method) {
    ScanParams p;
    p.grid_size = c.grid;
    p.zero_tol = c.tol;
    p.method = scan_method_from_string(method);
    return p;
}

std::vector<std::size_t> parse_n_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            throw UsageError("bad --n entry '" + item + "'");
        }
        if (used != item.size()) throw UsageError("bad --n entry '" + item + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw UsageError("--n is empty");
    return out;
}

void add_common(CLI::App* app, Common& c, bool with_trials) {
    if (with_trials) app->add_option("--trials", c.trials, "Monte Carlo trials");
    app->add_option("--seed", c.seed, "Root seed")->capture_default_str();
    app->add_option("--out", c.out, "Write machine-readable output here");
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--threads", c.threads, "Worker cap (0: $QBL_THREADS or all cores)");
}

std::string pencil_report(const PencilScan& s, const TwoQuadricBetti& b) {
    std::ostringstream os;
    os << "n=" << s.n << " method=" << to_string(s.method) << " crossings=" << s.crossings.size()
       << " sigma=" << s.sigma_count << " mu=" << s.mu << " m=" << s.min_index
       << " constant=" << (s.index_constant ? 1 : 0) << "\n";
    os << "theta:";
    for (double t : s.crossings) os << ' ' << fmt(t, 10);
    os << "\narc_index:";
    for (auto v : s.arc_index) os << ' ' << v;
    os << "\nc+d=" << b.c_plus_d << " rk_d2=" << b.rank_d2 << " b=" << b.total_betti
       << " closed_form=" << b.closed_form_raw << " ledger=" << b.ledger_betti << " e3=" << b.rank_e3 << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random real quadrics: sampling, Betti numbers, pencils and Monte Carlo experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QBL_VERSION);

    Common c;

    // sample
    auto* sample = app.add_subcommand("sample", "Draw a GOE matrix (or Weyl quadric coefficients)");
    bool weyl = false;
    sample->add_option("--n", c.n, "Order")->required();
    sample->add_flag("--weyl", weyl, "Print Weyl quadric coefficients c_ij, i <= j");
    add_common(sample, c, false);

    // betti
    auto* betti = app.add_subcommand("betti", "Total Betti number of one quadric or of two");
    int k = 1;
    std::string m1, m2, method = "spectral";
    betti->add_option("--k", k, "Number of quadrics")->check(CLI::IsMember({1, 2}));
    betti->add_option("--n", c.n, "Order when sampling");
    betti->add_option("--matrix", m1, "First matrix literal or @file");
    betti->add_option("--matrix2", m2, "Second matrix literal or @file");
    betti->add_option("--grid", c.grid, "Grid size for the grid scan (0: 8n)");
    betti->add_option("--tol", c.tol, "Zero tolerance for inertia (< 0: default)");
    betti->add_option("--scan", method, "grid or spectral")->check(CLI::IsMember({"grid", "spectral"}));
    add_common(betti, c, false);

    // pencil
    auto* pencil = app.add_subcommand("pencil", "Index function of a pencil");
    pencil->add_option("--n", c.n, "Order when sampling");
    pencil->add_option("--matrix", m1, "First matrix literal or @file");
    pencil->add_option("--matrix2", m2, "Second matrix literal or @file");
    pencil->add_option("--grid", c.grid, "Grid size (0: 8n)");
    pencil->add_option("--tol", c.tol, "Zero tolerance (< 0: default)");
    pencil->add_option("--scan", method, "grid or spectral")->check(CLI::IsMember({"grid", "spectral"}));
    bool with_oracle = false;
    pencil->add_flag("--oracle", with_oracle, "Also count Sigma_W with the multiprecision Sturm oracle");
    add_common(pencil, c, false);

    // semicircle
    auto* semi = app.add_subcommand("semicircle", "Pooled ESD against the semicircle law");
    std::size_t bins = 200;
    semi->add_option("--n", c.n, "Order")->required();
    semi->add_option("--bins", bins, "Histogram bins");
    add_common(semi, c, true);

    // gap
    auto* gap = app.add_subcommand("gap", "Monte Carlo gap probability P{sigma(Q) >= eps}");
    double eps = 0.02;
    bool rescaled = false;
    gap->add_option("--n", c.n, "Order")->required();
    gap->add_option("--eps", eps, "Half-width of the gap");
    gap->add_flag("--rescaled", rescaled, "Threshold eps * ||Q||_F");
    add_common(gap, c, true);

    // crofton
    auto* crof = app.add_subcommand("crofton", "Mean real-root count on random projective lines");
    crof->add_option("--n", c.n, "Order when sampling");
    crof->add_option("--matrix", m1, "Matrix literal or @file (fixed quadric)");
    add_common(crof, c, true);

    // igcheck
    auto* ig = app.add_subcommand("igcheck", "Integral geometry formula on S^2");
    double band = 0.0;
    std::size_t rotations = 10000;
    ig->add_option("--band", band, "Band radius of B (0: B is a great circle)");
    ig->add_option("--rotations", rotations, "Haar rotations");
    add_common(ig, c, false);

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte Carlo experiment over a list of orders");
    std::string kind, n_list;
    bool do_assert = false, record_time = false;
    double refine_tol = 1e-10;
    exp->add_option("kind", kind, "Experiment kind")->required();
    exp->add_option("--n", n_list, "Comma-separated ascending orders")->required();
    exp->add_option("--grid", c.grid, "Grid size for the grid scan (0: 8n)");
    exp->add_option("--tol", c.tol, "Zero tolerance (< 0: default)");
    exp->add_option("--refine-tol", refine_tol, "Bisection width for the grid scan");
    exp->add_option("--scan", method, "grid or spectral")->check(CLI::IsMember({"grid", "spectral"}));
    exp->add_option("--eps", eps, "gap_slope epsilon");
    exp->add_flag("--rescaled", rescaled, "gap_slope: threshold eps * ||Q||_F");
    exp->add_option("--bins", bins, "semicircle bins");
    exp->add_flag("--assert", do_assert, "Exit 4 on invariant violations or flagged rows");
    exp->add_flag("--record-time", record_time, "Fill the seconds column");
    add_common(exp, c, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code == 0) return 0;
        std::cerr << "(seed=" << c.seed << ")\n";
        return kExitUsage;
    }

    try {
        if (*sample) {
            Rng rng(SeedSpec{c.seed, 0});
            const SymMatrix q = sample_goe(c.n, rng);
            std::string text;
            if (weyl) {
                const QuadraticForm f = matrix_to_form(q);
                std::ostringstream os;
                os.precision(17);
                for (std::size_t i = 0; i < c.n; ++i) {
                    for (std::size_t j = i; j < c.n; ++j) os << i << ',' << j << ',' << f.coeff(i, j) << '\n';
                }
                text = os.str();
            } else {
                text = q.to_string(17) + "\n";
            }
            std::cout << text;
            emit(c, text);
        } else if (*betti) {
            Rng rng(SeedSpec{c.seed, 0});
            SymMatrix q1 = matrix_or_sample(m1, c.n, rng);
            if (k == 1) {
                const BettiResult b = betti_one_quadric(q1, c.tol);
                if (b.degenerate) {
                    std::cerr << "degenerate quadric: kernel of dimension " << b.inertia.null << " (seed=" << c.seed
                              << ")\n";
                    return kExitNumeric;
                }
                std::cout << "mu=" << b.mu << " b=" << b.total_betti << "\n";
            } else {
                SymMatrix q2 = matrix_or_sample(m2, q1.order(), rng);
                const Pencil p(std::move(q1), std::move(q2));
                const PencilScan s = scan_index_function(p, scan_params(c, method));
                if (s.discarded) throw SampleDiscarded(s.discard_reason);
                const TwoQuadricBetti b = betti_two_quadrics(s);
                std::cout << "mu=" << b.mu << " sigma=" << b.sigma_count << " c+d=" << b.c_plus_d
                          << " b=" << b.rank_e3 << " closed_form=" << b.closed_form_raw
                          << " ledger=" << b.ledger_betti << "\n";
            }
        } else if (*pencil) {
            Rng rng(SeedSpec{c.seed, 0});
            SymMatrix q1 = matrix_or_sample(m1, c.n, rng);
            SymMatrix q2 = matrix_or_sample(m2, q1.order(), rng);
            const Pencil p(std::move(q1), std::move(q2));
            const PencilScan s = scan_index_function(p, scan_params(c, method));
            if (s.discarded) throw SampleDiscarded(s.discard_reason);
            std::string text = pencil_report(s, betti_two_quadrics(s));
            if (with_oracle) text += "oracle_sigma=" + std::to_string(spectral_variety_count_oracle(p)) + "\n";
            std::cout << text;
            emit(c, text);
        } else if (*semi) {
            ExperimentConfig cfg;
            cfg.kind = ExperimentKind::semicircle;
            cfg.n_list = {c.n};
            cfg.trials = c.trials ? c.trials : 100;
            cfg.root_seed = c.seed;
            cfg.threads = c.threads;
            cfg.bins = bins;
            const ExperimentReport r = run_experiment(cfg);
            const auto& row = r.rows.front();
            std::cout << "n=" << c.n << " samples=" << row.trials << " ks=" << fmt(row.mean)
                      << " mass_outside_2.1=" << fmt(row.extras.at("mass_outside_2.1")) << "\n";
            if (!c.out.empty()) {
                std::vector<Spectrum> spectra(cfg.trials);
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    spectra[t] = eigenvalues(sample_goe(c.n, trial_seed(c.seed, c.n, t)));
                }
                const EmpiricalSpectralDist esd = empirical_spectral_distribution(spectra, bins);
                std::ostringstream os;
                os << "# config " << config_summary(cfg) << "\n";
                os << "lo,hi,mass,semicircle_mass\n";
                os.precision(17);
                for (std::size_t b = 0; b < esd.masses.size(); ++b) {
                    const double lo = esd.bin_edges[b], hi = esd.bin_edges[b + 1];
                    os << lo << ',' << hi << ',' << esd.masses[b] << ','
                       << semicircle_cdf(hi) - semicircle_cdf(lo) << '\n';
                }
                emit(c, os.str());
            }
        } else if (*gap) {
            const std::size_t trials = c.trials ? c.trials : 100000;
            const GapEstimate g = gap_probability_mc(c.n, eps, trials, c.seed, rescaled, c.threads);
            std::ostringstream os;
            os << "n=" << c.n << " eps=" << fmt(eps) << " trials=" << trials << " estimate=" << fmt(g.estimate, 8)
               << " stderr=" << fmt(g.stderr_, 3);
            if (c.n % 2 == 0 && !rescaled) {
                const double ref = 2.0 * c_n_exact(c.n) * eps;
                os << " reference_1-f=" << fmt(ref, 8) << " ratio=" << fmt((1.0 - g.estimate) / ref, 6);
            }
            os << " seed=" << c.seed << "\n";
            std::cout << os.str();
            emit(c, os.str());
        } else if (*crof) {
            Rng rng(SeedSpec{c.seed, 0});
            const SymMatrix q = matrix_or_sample(m1, c.n, rng);
            const std::size_t lines = c.trials ? c.trials : 100000;
            const double est = crofton_volume_estimate(q, lines, SeedSpec{c.seed, 1});
            std::ostringstream os;
            os << "n=" << q.order() << " lines=" << lines << " mean_roots=" << fmt(est, 8) << " seed=" << c.seed
               << "\n";
            std::cout << os.str();
            emit(c, os.str());
        } else if (*ig) {
            const SubsphereSpec a = SubsphereSpec::great_circle();
            const SubsphereSpec b = band > 0.0 ? SubsphereSpec::equatorial_band(band) : SubsphereSpec::great_circle();
            const IntegralGeometryCheck r = integral_geometry_check(a, b, rotations, c.seed, c.threads);
            std::ostringstream os;
            os << "rotations=" << r.rotations << " lhs=" << fmt(r.lhs_estimate, 8)
               << " stderr=" << fmt(r.lhs_stderr, 3) << " rhs=" << fmt(r.rhs_exact, 8) << " seed=" << c.seed
               << "\n";
            std::cout << os.str();
            emit(c, os.str());
        } else if (*exp) {
            ExperimentConfig cfg;
            cfg.kind = experiment_kind_from_string(kind);
            cfg.n_list = parse_n_list(n_list);
            cfg.trials = c.trials ? c.trials : 100;
            cfg.root_seed = c.seed;
            cfg.threads = c.threads;
            cfg.scan.grid_size = c.grid;
            cfg.scan.zero_tol = c.tol;
            cfg.scan.refine_tol = refine_tol;
            cfg.scan.method = scan_method_from_string(method);
            cfg.zero_tol = c.tol;
            cfg.epsilon = eps;
            cfg.rescaled = rescaled;
            cfg.bins = bins;
            cfg.record_time = record_time;
            const ExperimentReport r = run_experiment(cfg);
            for (const auto& row : r.rows) {
                std::cout << to_string(cfg.kind) << " n=" << row.n << " trials=" << row.trials
                          << " mean=" << fmt(row.mean, 8) << " stderr=" << fmt(row.stderr_, 3)
                          << " discarded=" << row.discarded << (row.flagged ? " FLAGGED" : "") << "\n";
            }
            if (r.fit) {
                std::cout << "fit exponent=" << fmt(r.fit->exponent) << " intercept=" << fmt(r.fit->intercept)
                          << " r2=" << fmt(r.fit->r2) << "\n";
            }
            for (const auto& v : r.violations) {
                std::cout << "violation " << v.check << " n=" << v.n << " seed=" << v.seed.root_seed
                          << " stream=" << v.seed.stream_id << "\n";
            }
            emit(c, format_report(r, report_format_from_string(c.format)));
            if (do_assert) {
                bool flagged = false;
                for (const auto& row : r.rows) flagged = flagged || row.flagged;
                if (!r.violations.empty() || flagged) {
                    std::cerr << "assertion failed: " << r.violations.size() << " violations"
                              << (flagged ? ", flagged rows" : "") << " (seed=" << c.seed << ")\n";
                    return kExitAssert;
                }
            }
        }
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what();
        if (e.seed()) {
            std::cerr << " (seed=" << e.seed()->root_seed << " stream=" << e.seed()->stream_id << ")\n";
        } else {
            std::cerr << " (seed=" << c.seed << ")\n";
        }
        return kExitNumeric;
    } catch (const SampleDiscarded& e) {
        std::cerr << "non-generic sample: " << e.what() << " (seed=" << c.seed << ")\n";
        return kExitNumeric;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << " (seed=" << c.seed << ")\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << " (seed=" << c.seed << ")\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << " (seed=" << c.seed << ")\n";
        return 1;
    }
    return 0;
}
