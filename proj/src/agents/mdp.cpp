#include "slicesim/agents/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

MdpSpec::MdpSpec(std::size_t states, std::size_t actions, double disc)
    : num_states(states), num_actions(actions), transitions(states * actions),
      rewards(states * actions, 0.0), discount(disc) {}

void MdpSpec::validate() const {
    if (num_states == 0 || num_actions == 0) throw NonFiniteMdp("MDP has no states or actions");
    if (transitions.size() != num_states * num_actions || rewards.size() != transitions.size())
        throw NonFiniteMdp("MDP tables have inconsistent sizes");
    if (!std::isfinite(discount) || discount < 0.0 || discount > 1.0)
        throw NonFiniteMdp("discount outside [0, 1]");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        if (!std::isfinite(rewards[i])) throw NonFiniteMdp("non-finite reward");
        double total = 0.0;
        for (const auto& o : transitions[i]) {
            if (o.next >= num_states) throw NonFiniteMdp("transition to unknown state");
            if (!std::isfinite(o.prob) || o.prob < 0.0) throw NonFiniteMdp("bad probability");
            total += o.prob;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw NonFiniteMdp("row " + std::to_string(i) + " sums to " + std::to_string(total));
    }
}

double CtmdpSpec::max_outflow() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const std::size_t s = i / num_actions;
        double out = 0.0;
        for (const auto& r : rates[i])
            if (r.next != s) out += r.rate;
        best = std::max(best, out);
    }
    return best;
}

MdpSpec uniformize(const CtmdpSpec& ct, double lambda, double discount) {
    if (ct.rates.size() != ct.num_states * ct.num_actions || ct.rewards.size() != ct.rates.size())
        throw NonFiniteMdp("CTMDP tables have inconsistent sizes");
    if (!(lambda > 0.0) || lambda + 1e-12 < ct.max_outflow())
        throw InvalidParams("uniformization constant below the maximum outflow rate");
    MdpSpec mdp(ct.num_states, ct.num_actions, discount);
    for (std::size_t s = 0; s < ct.num_states; ++s) {
        for (std::size_t a = 0; a < ct.num_actions; ++a) {
            const std::size_t i = s * ct.num_actions + a;
            double out = 0.0;
            auto& row = mdp.outcomes(s, a);
            for (const auto& r : ct.rates[i]) {
                if (r.rate < 0.0) throw NonFiniteMdp("negative rate");
                if (r.next == s || r.rate == 0.0) continue;
                row.push_back({r.next, r.rate / lambda});
                out += r.rate;
            }
            const double stay = 1.0 - out / lambda;
            if (stay > 0.0) row.push_back({s, stay});
            mdp.reward(s, a) = ct.rewards[i];
        }
    }
    mdp.validate();
    return mdp;
}

namespace {

double backup(const MdpSpec& mdp, const std::vector<double>& v, std::size_t s, std::size_t a,
              double discount) {
    double ev = 0.0;
    for (const auto& o : mdp.outcomes(s, a)) ev += o.prob * v[o.next];
    return mdp.reward(s, a) + discount * ev;
}

// Best action of state s under `v` (ties to the lowest index) and its value.
std::pair<std::size_t, double> best(const MdpSpec& mdp, const std::vector<double>& v,
                                    std::size_t s, double discount) {
    std::size_t arg = 0;
    double val = backup(mdp, v, s, 0, discount);
    for (std::size_t a = 1; a < mdp.num_actions; ++a) {
        double q = backup(mdp, v, s, a, discount);
        if (q > val) {
            val = q;
            arg = a;
        }
    }
    return {arg, val};
}

} // namespace

ValueIterationResult value_iteration(const MdpSpec& mdp, double tolerance,
                                     std::size_t max_iterations) {
    mdp.validate();
    if (!(mdp.discount < 1.0)) throw NonFiniteMdp("discounted value iteration needs discount < 1");
    ValueIterationResult res;
    std::vector<double> v(mdp.num_states, 0.0), next(mdp.num_states, 0.0);
    res.policy.assign(mdp.num_states, 0);
    for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
        double diff = 0.0;
        for (std::size_t s = 0; s < mdp.num_states; ++s) {
            next[s] = best(mdp, v, s, mdp.discount).second;
            diff = std::max(diff, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        // v is now T(v_old); its own residual is at most discount * diff.
        if (mdp.discount * diff < tolerance) break;
    }
    double residual = 0.0;
    for (std::size_t s = 0; s < mdp.num_states; ++s) {
        auto [a, val] = best(mdp, v, s, mdp.discount);
        res.policy[s] = a;
        residual = std::max(residual, std::abs(val - v[s]));
    }
    res.values = std::move(v);
    res.residual = residual;
    return res;
}

AverageRewardResult relative_value_iteration(const MdpSpec& mdp, double tolerance,
                                             std::size_t reference_state, double aperiodicity,
                                             std::size_t max_iterations) {
    mdp.validate();
    if (reference_state >= mdp.num_states) throw InvalidParams("reference state out of range");
    if (!(aperiodicity > 0.0) || aperiodicity > 1.0) throw InvalidParams("aperiodicity not in (0,1]");
    const double tau = aperiodicity;
    AverageRewardResult res;
    std::vector<double> h(mdp.num_states, 0.0), th(mdp.num_states, 0.0);
    for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t s = 0; s < mdp.num_states; ++s) {
            // T'(h) = tau * T(h) + (1 - tau) * h for the mixed chain
            th[s] = tau * best(mdp, h, s, 1.0).second + (1.0 - tau) * h[s];
            lo = std::min(lo, th[s] - h[s]);
            hi = std::max(hi, th[s] - h[s]);
        }
        const double ref = th[reference_state];
        for (std::size_t s = 0; s < mdp.num_states; ++s) h[s] = th[s] - ref;
        res.span = hi - lo;
        res.gain = 0.5 * (hi + lo) / tau;
        if (res.span < tolerance) break;
    }
    res.policy.assign(mdp.num_states, 0);
    for (std::size_t s = 0; s < mdp.num_states; ++s) res.policy[s] = best(mdp, h, s, 1.0).first;
    res.bias = std::move(h);
    return res;
}

std::vector<double> q_from_values(const MdpSpec& mdp, const std::vector<double>& values) {
    std::vector<double> q(mdp.num_states * mdp.num_actions);
    for (std::size_t s = 0; s < mdp.num_states; ++s)
        for (std::size_t a = 0; a < mdp.num_actions; ++a)
            q[s * mdp.num_actions + a] = backup(mdp, values, s, a, mdp.discount);
    return q;
}

std::size_t sample_next_state(const MdpSpec& mdp, std::size_t s, std::size_t a,
                              sim::RngStream& stream) {
    const auto& row = mdp.outcomes(s, a);
    double u = stream.uniform();
    for (const auto& o : row) {
        if (u < o.prob) return o.next;
        u -= o.prob;
    }
    return row.back().next;
}

} // namespace slicesim::agents
