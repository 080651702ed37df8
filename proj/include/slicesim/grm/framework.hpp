#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "slicesim/agents/agent.hpp"
#include "slicesim/grm/admission.hpp"
#include "slicesim/infra/topology.hpp"
#include "slicesim/lrm/adaptation.hpp"
#include "slicesim/slicing/slice.hpp"
#include "slicesim/traffic/traffic.hpp"

namespace slicesim::grm {

struct ScenarioConfig {
    infra::BaParams network;
    std::vector<traffic::Tenant> tenants = default_tenants();
    double horizon_s = 48.0 * kSecondsPerHour;
    infra::PlacementPolicy placement = infra::PlacementPolicy::SpreadThenReuse;
    slicing::SliceManagerOptions slicing;
    bool simulate_flows = true;
    bool initial_slices = false;        // one slice per tenant deployed at t = 0
    bool satisfaction_feedback = false; // mean slice satisfaction appended to GRM features
    bool onehot_counts = false;         // GRM features carry one-hot occupancy per tenant
    bool check_invariants = false;      // after every event
    bool log_wallclock = false;         // otherwise wallclock columns are written as 0

    static std::vector<traffic::Tenant> default_tenants();
    void validate() const;
    std::size_t admission_cap() const; // concurrency cap implied by capacity and demand
    std::size_t grm_feature_dim() const;
};

/// Training progress covered by one episode, for the exploration schedule.
struct EpisodeControl {
    bool train_grm = false; // the GRM agent learns and explores
    bool train_lrm = false; // LRM agents explore (learning is the LocalManager's switch)
    double progress_begin = 0.0;
    double progress_end = 1.0;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_fraction = 0.5;
    bool keep_decisions = true;
};

struct EpisodeResult {
    double revenue_total = 0.0;
    double revenue_per_hour = 0.0;
    double admitted_reward_total = 0.0; // sum of immediate rewards of admitted requests
    std::vector<std::size_t> arrived;
    std::vector<std::size_t> accepted;
    std::vector<std::size_t> coerced;
    std::vector<DecisionRecord> decisions;
    std::vector<slicing::StatusRecord> status;
    std::vector<infra::Placement> placements;
    std::size_t orphaned_flows = 0;
    std::uint64_t traffic_checksum = 0; // request arrivals and holding times
    std::uint64_t events_dispatched = 0;
    std::size_t max_concurrent = 0;
    std::string invariant_violation; // first breach seen, empty if none
    infra::Topology topology;
};

/// Drive one episode of `scenario` under `seed`. `lrms` is indexed by tenant;
/// null entries (or an empty vector) leave that tenant's slices static.
EpisodeResult run_episode(const ScenarioConfig& scenario, std::uint64_t seed, agents::Agent& grm,
                          const std::vector<lrm::LocalManager*>& lrms,
                          const EpisodeControl& control);

/// Admission-only shortcut: no flows, no measurements, no LRMs.
EpisodeResult run_admission_episode(const ScenarioConfig& scenario, std::uint64_t seed,
                                    agents::Agent& grm, const EpisodeControl& control);

/// Agent-independent traffic identity of (scenario, seed): hashes the request
/// arrival times and holding times that run_episode would draw.
std::uint64_t traffic_checksum(const ScenarioConfig& scenario, std::uint64_t seed);

} // namespace slicesim::grm
