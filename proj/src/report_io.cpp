#include "qbl/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qbl/error.hpp"

namespace qbl {

namespace {

using nlohmann::json;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json num_json(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

json config_json(const ExperimentConfig& c) {
    return json{{"kind", to_string(c.kind)},
                {"n_list", c.n_list},
                {"trials", c.trials},
                {"root_seed", c.root_seed},
                {"scan_method", to_string(c.scan.method)},
                {"grid_size", c.scan.grid_size},
                {"refine_tol", c.scan.refine_tol},
                {"scan_zero_tol", c.scan.zero_tol},
                {"zero_tol", c.zero_tol},
                {"epsilon", c.epsilon},
                {"rescaled", c.rescaled},
                {"bins", c.bins},
                {"max_resamples", c.max_resamples}};
}

}  // namespace

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw InvalidArgument("unknown format '" + s + "' (expected csv or json)");
}

std::string config_summary(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "kind=" << to_string(c.kind) << " n=" << join(c.n_list) << " trials=" << c.trials
       << " seed=" << c.root_seed << " scan=" << to_string(c.scan.method) << " grid=" << c.scan.grid_size
       << " refine_tol=" << num(c.scan.refine_tol) << " scan_zero_tol=" << num(c.scan.zero_tol)
       << " zero_tol=" << num(c.zero_tol) << " eps=" << num(c.epsilon) << " rescaled=" << (c.rescaled ? 1 : 0)
       << " bins=" << c.bins << " max_resamples=" << c.max_resamples << " version=" << QBL_VERSION;
    return os.str();
}

std::string report_to_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "# config " << config_summary(r.config) << '\n';
    os << "kind,n,trials,mean,stderr,mean_mu,mean_sigma_count,mean_cplusd,mean_rankd2,mean_imbalance,discarded,"
          "seconds\n";
    for (const auto& row : r.rows) {
        os << to_string(r.config.kind) << ',' << row.n << ',' << row.trials << ',' << num(row.mean) << ','
           << num(row.stderr_) << ',' << num(row.mean_mu) << ',' << num(row.mean_sigma_count) << ','
           << num(row.mean_cplusd) << ',' << num(row.mean_rankd2) << ',' << num(row.mean_imbalance) << ','
           << row.discarded << ',' << num(row.seconds) << '\n';
    }
    return os.str();
}

std::string report_to_json(const ExperimentReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json extras = json::object();
        for (const auto& [k, v] : row.extras) extras[k] = num_json(v);
        rows.push_back({{"n", row.n},
                        {"trials", row.trials},
                        {"mean", num_json(row.mean)},
                        {"stderr", num_json(row.stderr_)},
                        {"mean_mu", num_json(row.mean_mu)},
                        {"mean_sigma_count", num_json(row.mean_sigma_count)},
                        {"mean_cplusd", num_json(row.mean_cplusd)},
                        {"mean_rankd2", num_json(row.mean_rankd2)},
                        {"mean_imbalance", num_json(row.mean_imbalance)},
                        {"discarded", row.discarded},
                        {"failures", row.failures},
                        {"flagged", row.flagged},
                        {"seconds", row.seconds},
                        {"extras", extras}});
    }
    json violations = json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"check", v.check}, {"n", v.n}, {"root_seed", v.seed.root_seed},
                              {"stream_id", v.seed.stream_id}});
    }
    json doc{{"config", config_json(r.config)},
             {"version", r.version},
             {"rows", rows},
             {"violations", violations},
             {"wall_seconds", r.wall_seconds}};
    if (r.fit) {
        doc["fit"] = {{"exponent", r.fit->exponent}, {"intercept", r.fit->intercept}, {"r2", r.fit->r2}};
    } else {
        doc["fit"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

std::string format_report(const ExperimentReport& r, ReportFormat f) {
    return f == ReportFormat::csv ? report_to_csv(r) : report_to_json(r);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace qbl
