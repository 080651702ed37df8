#include "slicesim/grm/framework.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>
#include <optional>

#include "slicesim/agents/policy.hpp"
#include "slicesim/core/errors.hpp"
#include "slicesim/sim/engine.hpp"
#include "slicesim/sim/rng.hpp"

namespace slicesim::grm {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t hash_value(std::uint64_t h, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    return sim::fnv1a64(std::string_view(bytes, 8), h);
}

std::uint64_t combine(const std::vector<std::uint64_t>& per_tenant) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : per_tenant) h = sim::splitmix64(h ^ v);
    return h;
}

std::uint64_t flow_stream_index(TenantIndex tenant, std::uint64_t ordinal) {
    return (static_cast<std::uint64_t>(tenant) << 32) | (ordinal & 0xffffffffULL);
}

class Episode {
public:
    Episode(const ScenarioConfig& sc, std::uint64_t seed, agents::Agent& grm,
            const std::vector<lrm::LocalManager*>& lrms, const EpisodeControl& control)
        : sc_(sc), seed_(seed), grm_(grm), lrms_(lrms), control_(control) {
        sim::RngStream topo_stream(seed, "topology");
        result_.topology = infra::generate_ba_topology(sc.network, topo_stream);
        manager_.emplace(engine_, result_.topology, sc.slicing);
        const std::size_t t = sc.tenants.size();
        for (std::size_t k = 0; k < t; ++k) {
            arrivals_.emplace_back(seed, "requests", k);
            holding_.emplace_back(seed, "holding", k);
            demand_.push_back(infra::uniform_demand(
                result_.topology, sc.tenants[k].slice_type.units_per_request_per_dc));
        }
        encoding_.emplace(t, sc.admission_cap(), sc.onehot_counts);
        counts_.assign(t, 0);
        ordinals_.assign(t, 0);
        tenant_hash_.assign(t, 0xcbf29ce484222325ULL);
        result_.arrived.assign(t, 0);
        result_.accepted.assign(t, 0);
        result_.coerced.assign(t, 0);
        if (!lrms_.empty() && lrms_.size() != t)
            throw InvalidParams("one LRM slot per tenant expected");
    }

    EpisodeResult run() {
        if (sc_.initial_slices) deploy_initial();
        for (std::size_t k = 0; k < sc_.tenants.size(); ++k) schedule_arrival(k, 0.0);
        if (sc_.simulate_flows) engine_.schedule(sim::SimEvent::measurement(0.0));
        engine_.run_until(sc_.horizon_s, [this](const sim::SimEvent& ev) { dispatch(ev); });
        result_.revenue_per_hour = result_.revenue_total / (sc_.horizon_s / kSecondsPerHour);
        result_.orphaned_flows = manager_->orphaned_flows();
        result_.traffic_checksum = combine(tenant_hash_);
        result_.events_dispatched = engine_.dispatched();
        result_.status = manager_->records();
        return std::move(result_);
    }

private:
    double progress(double now) const {
        const double frac = sc_.horizon_s > 0 ? std::clamp(now / sc_.horizon_s, 0.0, 1.0) : 0.0;
        return control_.progress_begin + (control_.progress_end - control_.progress_begin) * frac;
    }

    double epsilon(double now) const {
        return agents::annealed_epsilon(progress(now), control_.epsilon_start,
                                        control_.epsilon_end, control_.epsilon_fraction);
    }

    void schedule_arrival(TenantIndex k, double now) {
        const double gap = traffic::next_request_interarrival(sc_.tenants[k], arrivals_[k]);
        engine_.schedule(sim::SimEvent::request_arrival(now + gap, k));
    }

    void deploy_initial() {
        for (std::size_t k = 0; k < sc_.tenants.size(); ++k) {
            if (!infra::can_admit(result_.topology, demand_[k])) continue;
            sim::RngStream hold(seed_, "initial-holding", k);
            const double holding = traffic::request_holding_time(sc_.tenants[k], hold);
            const SliceId id = next_slice_++;
            auto placement = place(k, id);
            infra::allocate(result_.topology, id, demand_[k]);
            ++counts_[k];
            instantiate(k, std::move(placement), flow_stream_index(k, 0), 0.0, holding);
        }
    }

    // Must run before the request's units are reserved.
    infra::Placement place(TenantIndex k, SliceId id) const {
        return infra::place_vnfs(result_.topology, id, sc_.tenants[k].slice_type.num_vnfs,
                                 demand_[k], sc_.placement);
    }

    void instantiate(TenantIndex k, infra::Placement placement, std::uint64_t flow_index,
                     double now, double holding) {
        const auto& type = sc_.tenants[k].slice_type;
        const SliceId id = placement.slice;
        traffic::FlowTrace trace;
        trace.slice = id;
        if (sc_.simulate_flows) {
            sim::RngStream flows(seed_, "flows", flow_index);
            trace = traffic::generate_flow_trace(type, id, now, flows);
        }
        if (control_.keep_decisions) result_.placements.push_back(placement);
        auto& slice = manager_->create(id, k, type, std::move(placement), std::move(trace), now,
                                       sc_.simulate_flows);
        slice.completion = engine_.schedule(sim::SimEvent::request_completion(now + holding, id));
        result_.max_concurrent = std::max(
            result_.max_concurrent,
            static_cast<std::size_t>(std::accumulate(counts_.begin(), counts_.end(), std::size_t{0})));
    }

    agents::Observation grm_observation(const AdmissionState& state) const {
        agents::Observation obs;
        obs.features = encoding_->features(state);
        if (sc_.satisfaction_feedback) obs.features.push_back(mean_satisfaction());
        obs.discrete = encoding_->index(state);
        const auto& demand = demand_[state.arriving];
        std::vector<Units> residual, need;
        residual.reserve(demand.size());
        for (auto [dc, units] : demand) {
            residual.push_back(result_.topology.dc(dc).residual());
            need.push_back(units);
        }
        obs.feasible = {1, static_cast<char>(agents::greedy_decision({residual, need}))};
        return obs;
    }

    double mean_satisfaction() const {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& [id, slice] : manager_->slices()) {
            if (!slice.active()) continue;
            sum += slice.last_satisfaction;
            ++n;
        }
        return n ? sum / static_cast<double>(n) : 1.0;
    }

    void on_request(const sim::SimEvent& ev) {
        const TenantIndex k = ev.subject;
        const double now = ev.time;
        const std::uint64_t ordinal = ++ordinals_[k];
        const double holding = traffic::request_holding_time(sc_.tenants[k], holding_[k]);
        tenant_hash_[k] = hash_value(hash_value(tenant_hash_[k], now), holding);
        schedule_arrival(k, now);
        ++result_.arrived[k];

        const auto start = Clock::now();
        AdmissionState state{counts_, k};
        agents::Observation obs = grm_observation(state);
        const double observe_us =
            std::chrono::duration<double, std::micro>(Clock::now() - start).count();

        if (control_.train_grm) {
            if (pending_) grm_.learn(pending_->obs, pending_->action, pending_->reward, obs, false);
            grm_.set_exploration(epsilon(now));
        }

        const auto decide = Clock::now();
        const std::size_t action = grm_.act(obs);
        const SliceId id = next_slice_;
        std::optional<infra::Placement> placement;
        if (action == static_cast<std::size_t>(AdmissionAction::Accept) &&
            infra::can_admit(result_.topology, demand_[k]))
            placement = place(k, id);
        const StepOutcome out =
            admission_step(state, static_cast<AdmissionAction>(action),
                           sc_.tenants[k].immediate_reward, id, demand_[k], result_.topology);
        if (out.admitted) {
            ++next_slice_;
            counts_ = out.next.counts;
            instantiate(k, std::move(*placement), flow_stream_index(k, ordinal), now, holding);
            ++result_.accepted[k];
            result_.admitted_reward_total += sc_.tenants[k].immediate_reward;
        }
        if (out.coerced) ++result_.coerced[k];
        result_.revenue_total += out.reward;
        const double wall =
            observe_us + std::chrono::duration<double, std::micro>(Clock::now() - decide).count();

        if (control_.keep_decisions) {
            result_.decisions.push_back(DecisionRecord{
                now, k, out.admitted ? AdmissionAction::Accept : AdmissionAction::Reject,
                out.coerced, out.reward, state.counts, sc_.log_wallclock ? wall : 0.0});
        }
        if (control_.train_grm) pending_ = Pending{std::move(obs), action, out.reward};
    }

    void on_completion(const sim::SimEvent& ev) {
        auto* slice = manager_->find(ev.subject);
        if (!slice || !slice->active()) return;
        const TenantIndex k = slice->tenant;
        manager_->terminate(ev.subject, ev.time);
        --counts_[k];
        if (!lrms_.empty() && lrms_[k]) lrms_[k]->on_terminate(ev.subject);
    }

    void on_measurement(const sim::SimEvent& ev) {
        manager_->record_status_tick(ev.time);
        if (lrms_.empty()) return;
        if (control_.train_lrm) {
            const double eps = epsilon(ev.time);
            for (auto* m : lrms_)
                if (m) m->agent().set_exploration(eps);
        }
        for (SliceId id : manager_->active_ids()) {
            auto* slice = manager_->find(id);
            if (!lrms_[slice->tenant]) continue;
            slice->adaptation_check = engine_.schedule(sim::SimEvent::adaptation_check(ev.time, id));
        }
    }

    void on_adaptation(const sim::SimEvent& ev) {
        auto* slice = manager_->find(ev.subject);
        if (!slice || !slice->active()) return;
        if (auto* m = lrms_.at(slice->tenant)) m->on_check(*slice, result_.topology, engine_, ev.time);
    }

    void dispatch(const sim::SimEvent& ev) {
        switch (ev.kind) {
        case sim::EventKind::RequestArrival: on_request(ev); break;
        case sim::EventKind::RequestCompletion: on_completion(ev); break;
        case sim::EventKind::FlowArrival:
        case sim::EventKind::FlowServiceEnd: manager_->handle_flow_event(ev); break;
        case sim::EventKind::Measurement: on_measurement(ev); break;
        case sim::EventKind::AdaptationCheck: on_adaptation(ev); break;
        }
        if (sc_.check_invariants && result_.invariant_violation.empty()) check(ev);
    }

    void check(const sim::SimEvent& ev) {
        std::string err = manager_->check_invariants();
        std::vector<std::size_t> live(sc_.tenants.size(), 0);
        for (const auto& [id, slice] : manager_->slices())
            if (slice.active()) ++live[slice.tenant];
        if (live != counts_) err += "admission counts disagree with active slices; ";
        if (std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}) > encoding_->cap())
            err += "admission counts exceed the cap; ";
        if (!err.empty())
            result_.invariant_violation = "t=" + std::to_string(ev.time) + " " +
                                          sim::to_string(ev.kind) + ": " + err;
    }

    struct Pending {
        agents::Observation obs;
        std::size_t action = 0;
        double reward = 0.0;
    };

    const ScenarioConfig& sc_;
    std::uint64_t seed_;
    agents::Agent& grm_;
    const std::vector<lrm::LocalManager*>& lrms_;
    EpisodeControl control_;
    sim::Engine engine_;
    std::optional<slicing::SliceManager> manager_;
    std::optional<AdmissionEncoding> encoding_;
    std::vector<sim::RngStream> arrivals_, holding_;
    std::vector<infra::Demand> demand_;
    std::vector<std::size_t> counts_;
    std::vector<std::uint64_t> ordinals_;
    std::vector<std::uint64_t> tenant_hash_;
    SliceId next_slice_ = 1;
    std::optional<Pending> pending_;
    EpisodeResult result_;
};

} // namespace

std::vector<traffic::Tenant> ScenarioConfig::default_tenants() {
    traffic::Tenant a;
    a.id = "A";
    a.request_rate = 10.0;
    a.completion_rate = 6.0;
    a.immediate_reward = 2.0;
    a.slice_type = traffic::SliceType{1, 4, 180, 2.0, 200.0, 60};
    traffic::Tenant b;
    b.id = "B";
    b.request_rate = 12.0;
    b.completion_rate = 6.0;
    b.immediate_reward = 1.0;
    b.slice_type = traffic::SliceType{2, 4, 60, 5.0, 300.0, 60};
    return {a, b};
}

void ScenarioConfig::validate() const {
    if (tenants.empty()) throw InvalidParams("scenario needs at least one tenant");
    for (const auto& t : tenants) t.validate();
    if (!(horizon_s > 0)) throw InvalidParams("horizon must be positive");
    if (network.num_dcs == 0) throw InvalidParams("scenario needs at least one DC");
    if (network.dc_capacity < 0) throw InvalidParams("DC capacity must be non-negative");
    if (!(slicing.measurement_period > 0))
        throw InvalidParams("measurement period must be positive");
    (void)admission_cap();
}

std::size_t ScenarioConfig::admission_cap() const {
    std::size_t cap = static_cast<std::size_t>(-1);
    for (const auto& t : tenants) {
        const Units u = t.slice_type.units_per_request_per_dc;
        if (u <= 0) throw InvalidParams("request demand must be positive");
        cap = std::min(cap, static_cast<std::size_t>(network.dc_capacity / u));
    }
    if (cap == 0) throw InvalidParams("DC capacity admits no request at all");
    return cap;
}

std::size_t ScenarioConfig::grm_feature_dim() const {
    return AdmissionEncoding::feature_dim(tenants.size(), admission_cap(), onehot_counts) +
           (satisfaction_feedback ? 1 : 0);
}

EpisodeResult run_episode(const ScenarioConfig& scenario, std::uint64_t seed, agents::Agent& grm,
                          const std::vector<lrm::LocalManager*>& lrms,
                          const EpisodeControl& control) {
    scenario.validate();
    Episode episode(scenario, seed, grm, lrms, control);
    return episode.run();
}

EpisodeResult run_admission_episode(const ScenarioConfig& scenario, std::uint64_t seed,
                                    agents::Agent& grm, const EpisodeControl& control) {
    ScenarioConfig sc = scenario;
    sc.simulate_flows = false;
    sc.initial_slices = false;
    sc.satisfaction_feedback = false;
    return run_episode(sc, seed, grm, {}, control);
}

std::uint64_t traffic_checksum(const ScenarioConfig& scenario, std::uint64_t seed) {
    std::vector<std::uint64_t> per_tenant;
    for (std::size_t k = 0; k < scenario.tenants.size(); ++k) {
        sim::RngStream arrivals(seed, "requests", k);
        sim::RngStream holding(seed, "holding", k);
        std::uint64_t h = 0xcbf29ce484222325ULL;
        double t = traffic::next_request_interarrival(scenario.tenants[k], arrivals);
        while (t <= scenario.horizon_s) {
            const double hold = traffic::request_holding_time(scenario.tenants[k], holding);
            h = hash_value(hash_value(h, t), hold);
            t += traffic::next_request_interarrival(scenario.tenants[k], arrivals);
        }
        per_tenant.push_back(h);
    }
    return combine(per_tenant);
}

} // namespace slicesim::grm
