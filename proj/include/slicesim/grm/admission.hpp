#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "slicesim/agents/mdp.hpp"
#include "slicesim/core/types.hpp"
#include "slicesim/infra/topology.hpp"

namespace slicesim::grm {

enum class AdmissionAction : std::size_t { Reject = 0, Accept = 1 };
inline constexpr std::size_t kAdmissionActions = 2;

const char* to_string(AdmissionAction action);

/// Accepted requests currently held, per tenant, plus whose request is
/// waiting for a decision.
struct AdmissionState {
    std::vector<std::size_t> counts;
    TenantIndex arriving = 0;
};

/// Maps admission states to network features and to a dense table index.
/// Counts are clamped to `cap`; the index is mixed radix over the counts
/// (base cap + 1) with the arriving tenant as the most significant digit.
class AdmissionEncoding {
public:
    /// Widest count one-hot we are willing to build.
    static constexpr std::size_t kMaxOneHotCap = 64;

    /// With `onehot_counts` every count is also given as a one-hot block of
    /// width cap + 1, which lets a network resolve single-slot differences.
    AdmissionEncoding(std::size_t num_tenants, std::size_t cap, bool onehot_counts = false);

    std::size_t num_tenants() const { return num_tenants_; }
    std::size_t cap() const { return cap_; }
    std::size_t num_states() const;
    std::size_t index(const AdmissionState& state) const;
    AdmissionState decode(std::size_t index) const;

    /// [count_k / cap for each tenant] ++ [one-hot(count_k) for each tenant,
    /// when enabled] ++ one-hot(arriving tenant).
    std::vector<double> features(const AdmissionState& state) const;
    std::size_t feature_dim() const { return feature_dim(num_tenants_, cap_, onehot_); }
    bool onehot_counts() const { return onehot_; }

    static std::size_t feature_dim(std::size_t num_tenants, std::size_t cap, bool onehot_counts) {
        return 2 * num_tenants + (onehot_counts ? num_tenants * (cap + 1) : 0);
    }

private:
    std::size_t num_tenants_;
    std::size_t cap_;
    bool onehot_;
};

/// Largest number of requests of `demand` the network can hold at once.
std::size_t concurrency_cap(const infra::Topology& topology, const infra::Demand& demand);

struct StepOutcome {
    AdmissionState next;
    double reward = 0.0;
    bool admitted = false;
    bool coerced = false; // Accept turned into Reject for lack of capacity
};

/// One decision on the request of `state.arriving`. An admitted request
/// reserves `demand` for `slice` in the ledgers.
StepOutcome admission_step(const AdmissionState& state, AdmissionAction action,
                           double immediate_reward, SliceId slice, const infra::Demand& demand,
                           infra::Topology& topology);

struct DecisionRecord {
    double time = 0.0;
    TenantIndex tenant = 0;
    AdmissionAction action = AdmissionAction::Reject; // as applied
    bool coerced = false;
    double reward = 0.0;
    std::vector<std::size_t> counts; // before the decision
    double wallclock_us = 0.0;
};

void write_decision_csv_header(std::ostream& out);
/// nA and nB are the first two tenants' counts.
void write_decision_csv(const DecisionRecord& record, const std::string& tenant, std::ostream& out);

// Exact model of the admission problem for the oracle. Decision epochs are
// the events of the uniformized chain: states are (counts, event) where the
// event is the arrival of tenant k (0 <= k < T) or "no arrival" (k = T).

struct AdmissionModel {
    std::vector<double> arrival_rates;    // per hour
    std::vector<double> completion_rates; // per hour, per held request
    std::vector<double> rewards;
    std::size_t cap = 5;
    void validate() const;
    double uniformization_rate() const; // sum of arrivals + cap * max completion
};

class AdmissionMdp {
public:
    AdmissionMdp(AdmissionModel model, double discount);

    const AdmissionModel& model() const { return model_; }
    const agents::MdpSpec& spec() const { return spec_; }
    std::size_t state_index(const std::vector<std::size_t>& counts, std::size_t event) const;
    std::size_t num_count_vectors() const { return count_vectors_.size(); }
    const std::vector<std::size_t>& counts_of(std::size_t state) const;
    std::size_t event_of(std::size_t state) const;

    /// Revenue per hour of a per-step gain of the uniformized chain.
    double per_hour(double gain_per_step) const { return gain_per_step * rate_; }

    /// Policy over arrival states, in AdmissionEncoding index order.
    std::vector<std::size_t> to_agent_policy(const std::vector<std::size_t>& mdp_policy,
                                             const AdmissionEncoding& encoding) const;

private:
    AdmissionModel model_;
    double rate_;
    std::vector<std::vector<std::size_t>> count_vectors_; // sum <= cap
    std::vector<std::size_t> radix_index_;                 // mixed radix -> count vector id
    agents::MdpSpec spec_;
    std::size_t radix_of(const std::vector<std::size_t>& counts) const;
};

struct OracleSolution {
    std::vector<std::size_t> policy;       // over AdmissionMdp states
    std::vector<std::size_t> agent_policy; // over AdmissionEncoding states
    double revenue_per_hour = 0.0;         // long-run average
};

/// Average-reward optimal admission policy by relative value iteration.
OracleSolution solve_admission_oracle(const AdmissionMdp& mdp, const AdmissionEncoding& encoding,
                                      double tolerance = 1e-10);

} // namespace slicesim::grm
