#pragma once

#include <string>

#include "qbl/experiment.hpp"

namespace qbl {

enum class ReportFormat { csv, json };

ReportFormat report_format_from_string(const std::string& s);

/// One line, `key=value` pairs. Everything that affects results is included;
/// the thread count is not.
std::string config_summary(const ExperimentConfig& cfg);

/// A `# config ...` comment line, the header
/// kind,n,trials,mean,stderr,mean_mu,mean_sigma_count,mean_cplusd,mean_rankd2,mean_imbalance,discarded,seconds
/// and one row per n. Not-applicable values print as `nan`.
std::string report_to_csv(const ExperimentReport& report);

/// config, version, rows (with extras), fit, violations, wall_seconds.
/// Not-applicable values are null.
std::string report_to_json(const ExperimentReport& report);

std::string format_report(const ExperimentReport& report, ReportFormat format);

/// Throws std::runtime_error if the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qbl
