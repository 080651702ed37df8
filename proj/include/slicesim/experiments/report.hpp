#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slicesim/experiments/config.hpp"
#include "slicesim/experiments/experiments.hpp"

namespace slicesim::experiments {

struct RunInfo {
    std::string experiment;
    std::string agent = "all";
};

void write_revenue_csv(const MetricsReport& report, std::ostream& out);
void write_revenue_summary_csv(const MetricsReport& report, std::ostream& out);
void write_oracle_csv(const MetricsReport& report, std::ostream& out);
void write_acceptance_csv(const MetricsReport& report, std::ostream& out);
void write_satisfaction_csv(const MetricsReport& report, std::ostream& out);
void write_satisfaction_summary_csv(const MetricsReport& report, std::ostream& out);
void write_delay_csv(const MetricsReport& report, std::ostream& out);

/// Manifest JSON: code version, run info, config echo and hash, seeds, the
/// files written and the traffic checksum of every evaluation run.
std::string manifest_json(const MetricsReport& report, const ExperimentConfig& config,
                          const RunInfo& info, const std::vector<std::string>& files);

/// Write every CSV the report carries, its attachments and manifest.json
/// under `out_dir` (created if missing). Returns the relative paths written.
/// Throws IoError naming the offending path.
std::vector<std::string> export_report(const MetricsReport& report, const ExperimentConfig& config,
                                       const RunInfo& info, const std::string& out_dir);

} // namespace slicesim::experiments
