#include <algorithm>
#include <numeric>

#include "slicesim/core/errors.hpp"
#include "slicesim/grm/admission.hpp"

namespace slicesim::grm {

void AdmissionModel::validate() const {
    const std::size_t t = arrival_rates.size();
    if (t == 0 || completion_rates.size() != t || rewards.size() != t)
        throw InvalidParams("admission model: per-tenant vectors differ in length");
    for (std::size_t k = 0; k < t; ++k) {
        if (!(arrival_rates[k] > 0) || !(completion_rates[k] > 0))
            throw InvalidParams("admission model: rates must be positive");
        if (rewards[k] < 0) throw InvalidParams("admission model: negative reward");
    }
    if (cap == 0) throw InvalidParams("admission model: cap must be positive");
}

double AdmissionModel::uniformization_rate() const {
    const double arrivals = std::accumulate(arrival_rates.begin(), arrival_rates.end(), 0.0);
    const double mu = *std::max_element(completion_rates.begin(), completion_rates.end());
    return arrivals + static_cast<double>(cap) * mu;
}

AdmissionMdp::AdmissionMdp(AdmissionModel model, double discount) : model_(std::move(model)) {
    model_.validate();
    rate_ = model_.uniformization_rate();
    const std::size_t t = model_.arrival_rates.size();
    const std::size_t base = model_.cap + 1;

    std::size_t radix_size = 1;
    for (std::size_t k = 0; k < t; ++k) radix_size *= base;
    radix_index_.assign(radix_size, static_cast<std::size_t>(-1));
    for (std::size_t r = 0; r < radix_size; ++r) {
        std::vector<std::size_t> counts(t);
        std::size_t rest = r, total = 0;
        for (std::size_t k = 0; k < t; ++k) {
            counts[k] = rest % base;
            rest /= base;
            total += counts[k];
        }
        if (total > model_.cap) continue;
        radix_index_[r] = count_vectors_.size();
        count_vectors_.push_back(std::move(counts));
    }

    const std::size_t events = t + 1;
    spec_ = agents::MdpSpec(count_vectors_.size() * events, kAdmissionActions, discount);
    for (std::size_t v = 0; v < count_vectors_.size(); ++v) {
        const auto& counts = count_vectors_[v];
        const std::size_t held = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
        for (std::size_t e = 0; e < events; ++e) {
            const std::size_t s = v * events + e;
            for (std::size_t a = 0; a < kAdmissionActions; ++a) {
                auto post = counts;
                double reward = 0.0;
                if (e < t && a == static_cast<std::size_t>(AdmissionAction::Accept) &&
                    held < model_.cap) {
                    ++post[e];
                    reward = model_.rewards[e];
                }
                auto& out = spec_.outcomes(s, a);
                double stay = 1.0;
                for (std::size_t k = 0; k < t; ++k) {
                    const double p = model_.arrival_rates[k] / rate_;
                    out.push_back({state_index(post, k), p});
                    stay -= p;
                }
                for (std::size_t k = 0; k < t; ++k) {
                    if (post[k] == 0) continue;
                    auto down = post;
                    --down[k];
                    const double p =
                        static_cast<double>(post[k]) * model_.completion_rates[k] / rate_;
                    out.push_back({state_index(down, t), p});
                    stay -= p;
                }
                if (stay > 0) out.push_back({state_index(post, t), stay});
                spec_.reward(s, a) = reward;
            }
        }
    }
    spec_.validate();
}

std::size_t AdmissionMdp::radix_of(const std::vector<std::size_t>& counts) const {
    std::size_t r = 0;
    for (std::size_t k = counts.size(); k-- > 0;) {
        if (counts[k] > model_.cap) throw InvalidParams("admission counts exceed the cap");
        r = r * (model_.cap + 1) + counts[k];
    }
    return r;
}

std::size_t AdmissionMdp::state_index(const std::vector<std::size_t>& counts,
                                      std::size_t event) const {
    if (counts.size() != model_.arrival_rates.size() || event > counts.size())
        throw InvalidParams("admission MDP state out of range");
    const std::size_t v = radix_index_.at(radix_of(counts));
    if (v == static_cast<std::size_t>(-1)) throw InvalidParams("admission counts exceed the cap");
    return v * (counts.size() + 1) + event;
}

const std::vector<std::size_t>& AdmissionMdp::counts_of(std::size_t state) const {
    return count_vectors_.at(state / (model_.arrival_rates.size() + 1));
}

std::size_t AdmissionMdp::event_of(std::size_t state) const {
    return state % (model_.arrival_rates.size() + 1);
}

std::vector<std::size_t> AdmissionMdp::to_agent_policy(const std::vector<std::size_t>& mdp_policy,
                                                       const AdmissionEncoding& encoding) const {
    if (encoding.num_tenants() != model_.arrival_rates.size() || encoding.cap() != model_.cap)
        throw InvalidParams("encoding does not match the admission model");
    std::vector<std::size_t> policy(encoding.num_states(),
                                    static_cast<std::size_t>(AdmissionAction::Reject));
    for (std::size_t i = 0; i < policy.size(); ++i) {
        const AdmissionState st = encoding.decode(i);
        const std::size_t held =
            std::accumulate(st.counts.begin(), st.counts.end(), std::size_t{0});
        if (held > model_.cap) continue;
        policy[i] = mdp_policy.at(state_index(st.counts, st.arriving));
    }
    return policy;
}

OracleSolution solve_admission_oracle(const AdmissionMdp& mdp, const AdmissionEncoding& encoding,
                                      double tolerance) {
    const std::size_t t = mdp.model().arrival_rates.size();
    const std::size_t empty = mdp.state_index(std::vector<std::size_t>(t, 0), t);
    const auto avg = agents::relative_value_iteration(mdp.spec(), tolerance, empty, 0.9);
    OracleSolution sol;
    sol.policy = avg.policy;
    sol.agent_policy = mdp.to_agent_policy(avg.policy, encoding);
    sol.revenue_per_hour = mdp.per_hour(avg.gain);
    return sol;
}

} // namespace slicesim::grm
