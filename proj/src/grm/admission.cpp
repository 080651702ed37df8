#include "slicesim/grm/admission.hpp"

#include <cstdio>
#include <limits>
#include <ostream>

#include "slicesim/core/errors.hpp"

namespace slicesim::grm {

const char* to_string(AdmissionAction action) {
    return action == AdmissionAction::Accept ? "accept" : "reject";
}

AdmissionEncoding::AdmissionEncoding(std::size_t num_tenants, std::size_t cap,
                                     bool onehot_counts)
    : num_tenants_(num_tenants), cap_(cap), onehot_(onehot_counts) {
    if (num_tenants == 0) throw InvalidParams("admission encoding needs a tenant");
    if (cap == 0) throw InvalidParams("admission encoding needs a positive cap");
    if (onehot_ && cap > kMaxOneHotCap)
        throw InvalidParams("concurrency cap " + std::to_string(cap) +
                            " too large for one-hot count features");
}

std::size_t AdmissionEncoding::num_states() const {
    std::size_t n = num_tenants_;
    for (std::size_t k = 0; k < num_tenants_; ++k) {
        if (n > std::numeric_limits<std::size_t>::max() / (cap_ + 1))
            throw InvalidParams("admission state space too large to enumerate");
        n *= cap_ + 1;
    }
    return n;
}

std::size_t AdmissionEncoding::index(const AdmissionState& state) const {
    if (state.counts.size() != num_tenants_ || state.arriving >= num_tenants_)
        throw InvalidParams("admission state does not match the encoding");
    std::size_t idx = state.arriving;
    for (std::size_t k = num_tenants_; k-- > 0;)
        idx = idx * (cap_ + 1) + std::min(state.counts[k], cap_);
    return idx;
}

AdmissionState AdmissionEncoding::decode(std::size_t index) const {
    AdmissionState state;
    state.counts.resize(num_tenants_);
    for (std::size_t k = 0; k < num_tenants_; ++k) {
        state.counts[k] = index % (cap_ + 1);
        index /= cap_ + 1;
    }
    if (index >= num_tenants_) throw InvalidParams("admission index out of range");
    state.arriving = index;
    return state;
}

std::vector<double> AdmissionEncoding::features(const AdmissionState& state) const {
    std::vector<double> f(feature_dim(), 0.0);
    for (std::size_t k = 0; k < num_tenants_; ++k)
        f[k] = static_cast<double>(state.counts.at(k)) / static_cast<double>(cap_);
    std::size_t at = num_tenants_;
    if (onehot_) {
        for (std::size_t k = 0; k < num_tenants_; ++k, at += cap_ + 1)
            f[at + std::min(state.counts[k], cap_)] = 1.0;
    }
    f.at(at + state.arriving) = 1.0;
    return f;
}

std::size_t concurrency_cap(const infra::Topology& topology, const infra::Demand& demand) {
    std::size_t cap = std::numeric_limits<std::size_t>::max();
    for (auto [dc, units] : demand) {
        if (units <= 0) continue;
        cap = std::min(cap, static_cast<std::size_t>(topology.dc(dc).capacity / units));
    }
    if (cap == std::numeric_limits<std::size_t>::max())
        throw InvalidParams("admission demand has no positive entry");
    return cap;
}

StepOutcome admission_step(const AdmissionState& state, AdmissionAction action,
                           double immediate_reward, SliceId slice, const infra::Demand& demand,
                           infra::Topology& topology) {
    StepOutcome out;
    out.next = state;
    if (action != AdmissionAction::Accept) return out;
    if (!infra::can_admit(topology, demand)) {
        out.coerced = true;
        return out;
    }
    infra::allocate(topology, slice, demand);
    ++out.next.counts.at(state.arriving);
    out.reward = immediate_reward;
    out.admitted = true;
    return out;
}

void write_decision_csv_header(std::ostream& out) {
    out << "sim_time_s,tenant,action,coerced,reward,nA,nB,wallclock_us\n";
}

void write_decision_csv(const DecisionRecord& r, const std::string& tenant, std::ostream& out) {
    const auto count = [&](std::size_t k) -> unsigned long long {
        return k < r.counts.size() ? r.counts[k] : 0ULL;
    };
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.6f,%s,%s,%d,%.6f,%llu,%llu,%.3f\n", r.time, tenant.c_str(),
                  to_string(r.action), r.coerced ? 1 : 0, r.reward, count(0), count(1),
                  r.wallclock_us);
    out << buf;
}

} // namespace slicesim::grm
