#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "slicesim/agents/agent.hpp"
#include "slicesim/experiments/config.hpp"
#include "slicesim/grm/admission.hpp"
#include "slicesim/grm/framework.hpp"

namespace slicesim::experiments {

struct RevenueRow {
    std::string agent;
    double reward_b = 0.0;
    std::uint64_t seed = 0;
    double revenue_total = 0.0;
    double revenue_per_hour = 0.0;
};

struct AcceptanceRow {
    std::string agent;
    double reward_b = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> arrived;
    std::vector<std::size_t> accepted;
    double fraction(std::size_t tenant) const;
};

struct OracleRow {
    double reward_b = 0.0;
    double revenue_per_hour = 0.0; // long-run average of the optimal policy
    std::string policy;            // accept/reject per arrival state, compact
};

struct SatisfactionPoint {
    std::string mode;
    std::uint64_t seed = 0;
    double time = 0.0;
    double mean_satisfaction = 1.0;
    std::size_t active_slices = 0;
};

struct SatisfactionSummary {
    std::string mode;
    std::uint64_t seed = 0;
    double mean_satisfaction = 1.0; // over every status record of the run
    std::size_t records = 0;
    std::size_t adapt_events = 0;
};

struct DelayRow {
    std::string agent;
    std::size_t num_vnfs = 0;
    std::string definition; // "decision" or "decision_update"
    double median_us = 0.0;
    double p95_us = 0.0;
    std::size_t samples = 0;
};

/// A named text file produced next to the CSVs (logs, checkpoints, topology).
struct Attachment {
    std::string path; // relative to the output directory
    std::string content;
};

struct TrafficCheck {
    std::string agent;
    double reward_b = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t checksum = 0;
};

struct MetricsReport {
    std::vector<RevenueRow> revenue;
    std::vector<AcceptanceRow> acceptance;
    std::vector<OracleRow> oracle;
    std::vector<SatisfactionPoint> satisfaction_series;
    std::vector<SatisfactionSummary> satisfaction;
    std::vector<DelayRow> delay;
    std::vector<TrafficCheck> traffic;
    std::vector<Attachment> attachments;
    bool has_revenue = false, has_acceptance = false, has_satisfaction = false, has_delay = false;
};

// --- statistics ------------------------------------------------------------

double mean(const std::vector<double>& xs);
double sample_std(const std::vector<double>& xs); // n - 1 denominator; 0 for n < 2
/// Linear interpolation between order statistics (q in [0, 1]).
double quantile(std::vector<double> xs, double q);

// --- agents ----------------------------------------------------------------

grm::AdmissionMdp admission_mdp(const grm::ScenarioConfig& scenario, double discount);

/// GRM decision maker by name. `oracle` solves the admission MDP of the scenario.
std::unique_ptr<agents::Agent> make_grm_agent(const std::string& name,
                                              const grm::ScenarioConfig& scenario,
                                              const LearnerParams& params, std::uint64_t seed);

/// LRM decision maker by name for slices with `num_vnfs` VNFs.
std::unique_ptr<agents::Agent> make_lrm_agent(const std::string& name, std::size_t num_vnfs,
                                              const ExperimentConfig& config, std::uint64_t seed);

/// Train `agent` on admission-only episodes drawn from `train_seed`.
void train_grm_agent(agents::Agent& agent, const grm::ScenarioConfig& scenario,
                     const LearnerParams& params, std::size_t episodes, std::uint64_t train_seed);

/// Train the LRM agents (one per tenant, null to skip) with the GRM fixed.
void train_lrm_agents(const std::vector<agents::Agent*>& lrm_agents, agents::Agent& grm_agent,
                      const grm::ScenarioConfig& scenario, const ExperimentConfig& config,
                      std::size_t episodes);

// --- studies ---------------------------------------------------------------

/// Revenue and per-tenant acceptance of each configured agent for every
/// tenant-B reward and evaluation seed. Learners are trained once per reward
/// and evaluated greedily on the seeds.
void run_admission_study(const ExperimentConfig& config, MetricsReport& report);

/// Intelligent (learned admission + learned adaptation) against
/// non-intelligent (greedy admission, static slices) on paired seeds.
void run_satisfaction_study(const ExperimentConfig& config, MetricsReport& report);

/// Wallclock per adaptation decision for each agent and VNF count.
void run_delay_study(const ExperimentConfig& config, MetricsReport& report);

/// experiment in {revenue, acceptance, satisfaction, delay, all}; throws
/// ConfigError otherwise.
MetricsReport run_experiment(const ExperimentConfig& config, const std::string& experiment);

} // namespace slicesim::experiments
