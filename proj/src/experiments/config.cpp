#include "slicesim/experiments/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <type_traits>

#include "slicesim/core/errors.hpp"
#include "slicesim/sim/rng.hpp"

namespace slicesim::experiments {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(trim(std::string_view(text).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
        throw ConfigError(key + ": cannot parse '" + text + "'");
    return value;
}

template <class T>
std::string format_number(T value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

template <class T>
std::string format_value(const T& v) {
    if constexpr (std::is_same_v<T, bool>) {
        return v ? "true" : "false";
    } else if constexpr (std::is_same_v<T, std::string>) {
        return v;
    } else if constexpr (std::is_arithmetic_v<T>) {
        return format_number(v);
    } else {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",";
            out += format_value(v[i]);
        }
        return out;
    }
}

template <class T>
struct is_vector : std::false_type {};
template <class U>
struct is_vector<std::vector<U>> : std::true_type {};

template <class T>
T parse_value(const std::string& key, const std::string& text) {
    if constexpr (std::is_same_v<T, bool>) {
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw ConfigError(key + ": expected true or false, got '" + text + "'");
    } else if constexpr (std::is_same_v<T, std::string>) {
        return text;
    } else if constexpr (std::is_arithmetic_v<T>) {
        return parse_number<T>(key, text);
    } else {
        static_assert(is_vector<T>::value);
        using Elem = typename T::value_type;
        T out;
        for (const auto& item : split_list(text)) {
            if constexpr (std::is_integral_v<Elem>) {
                // "a..b" expands to the inclusive integer range.
                if (auto dots = item.find(".."); dots != std::string::npos) {
                    const Elem lo = parse_number<Elem>(key, trim(item.substr(0, dots)));
                    const Elem hi = parse_number<Elem>(key, trim(item.substr(dots + 2)));
                    if (hi < lo) throw ConfigError(key + ": empty range '" + item + "'");
                    for (Elem v = lo;; ++v) {
                        out.push_back(v);
                        if (v == hi) break;
                    }
                    continue;
                }
            }
            out.push_back(parse_value<Elem>(key, item));
        }
        return out;
    }
}

struct Entry {
    std::string name;
    std::string help;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class Access>
Entry entry(std::string name, std::string help, Access access) {
    Entry e;
    e.name = name;
    e.help = std::move(help);
    e.get = [access](const ExperimentConfig& c) { return format_value(access(c)); };
    e.set = [access, name](ExperimentConfig& c, const std::string& text) {
        auto& field = access(c);
        field = parse_value<std::remove_reference_t<decltype(field)>>(name, text);
    };
    return e;
}

#define FIELD(path) [](auto& c) -> auto& { return c.path; }

void add_slice_type(std::vector<Entry>& t, const std::string& p, SliceTypeParams ExperimentConfig::*m) {
    t.push_back(entry(p + ".num_vnfs", "VNFs per slice",
                      [m](auto& c) -> auto& { return (c.*m).num_vnfs; }));
    t.push_back(entry(p + ".total_flows", "flows per slice instance",
                      [m](auto& c) -> auto& { return (c.*m).total_flows; }));
    t.push_back(entry(p + ".flow_arrival_interval", "mean seconds between flows",
                      [m](auto& c) -> auto& { return (c.*m).flow_arrival_interval; }));
    t.push_back(entry(p + ".flow_service_time", "mean flow service seconds",
                      [m](auto& c) -> auto& { return (c.*m).flow_service_time; }));
    t.push_back(entry(p + ".units_per_request_per_dc", "units reserved at every DC",
                      [m](auto& c) -> auto& { return (c.*m).units_per_request_per_dc; }));
}

void add_tenant(std::vector<Entry>& t, const std::string& p, TenantParams ExperimentConfig::*m) {
    t.push_back(entry(p + ".request_rate", "requests per hour",
                      [m](auto& c) -> auto& { return (c.*m).request_rate; }));
    t.push_back(entry(p + ".completion_rate", "completions per hour per request",
                      [m](auto& c) -> auto& { return (c.*m).completion_rate; }));
    t.push_back(entry(p + ".reward", "immediate reward of an accepted request",
                      [m](auto& c) -> auto& { return (c.*m).reward; }));
    t.push_back(entry(p + ".slice_type", "1 or 2",
                      [m](auto& c) -> auto& { return (c.*m).slice_type; }));
}

void add_learner(std::vector<Entry>& t, const std::string& p, LearnerParams ExperimentConfig::*m) {
#define LEARNER(field, help)                                                                  \
    t.push_back(entry(p + "." #field, help, [m](auto& c) -> auto& { return (c.*m).field; }))
    LEARNER(gamma, "discount per decision");
    LEARNER(hidden, "hidden layer widths");
    LEARNER(learning_rate, "initial network step size");
    LEARNER(learning_rate_final, "network step size at the end of training");
    LEARNER(momentum, "SGD momentum, 0 for plain SGD");
    LEARNER(replay_capacity, "replay buffer size");
    LEARNER(batch_size, "minibatch size");
    LEARNER(target_sync, "training steps between target syncs");
    LEARNER(reward_scale, "reward multiplier for the network, 0 = 1/max reward");
    LEARNER(reward_centering, "step of the average reward subtracted from targets, 0 = off");
    LEARNER(epsilon_start, "exploration at the start of training");
    LEARNER(epsilon_end, "exploration after annealing");
    LEARNER(epsilon_fraction, "share of training spent annealing");
    LEARNER(alpha, "tabular step size");
    LEARNER(alpha_decay_visits, "tabular step decay constant, 0 = constant step");
    LEARNER(alpha_exponent, "tabular step decay exponent");
#undef LEARNER
}

const std::vector<Entry>& table() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> t;
        t.push_back(entry("infrastructure.num_nodes", "physical nodes", FIELD(num_nodes)));
        t.push_back(entry("infrastructure.attachment", "BA edges per new node", FIELD(attachment)));
        t.push_back(entry("infrastructure.num_dcs", "data centers", FIELD(num_dcs)));
        t.push_back(entry("infrastructure.num_inps", "infrastructure providers", FIELD(num_inps)));
        t.push_back(entry("infrastructure.dc_capacity", "processing units per DC", FIELD(dc_capacity)));
        t.push_back(entry("infrastructure.placement", "spread_then_reuse | spread_only",
                          FIELD(placement)));
        add_slice_type(t, "slice_type.1", &ExperimentConfig::type1);
        add_slice_type(t, "slice_type.2", &ExperimentConfig::type2);
        add_tenant(t, "tenant.A", &ExperimentConfig::tenant_a);
        add_tenant(t, "tenant.B", &ExperimentConfig::tenant_b);
        t.push_back(entry("slicing.chain_units", "per_vnf | per_flow", FIELD(chain_units)));
        t.push_back(entry("slicing.satisfaction_norm", "waiting flows for zero satisfaction, 0 = flow count",
                          FIELD(satisfaction_norm)));
        t.push_back(entry("slicing.measurement_period", "seconds between status records",
                          FIELD(measurement_period)));
        t.push_back(entry("grm.horizon_hours", "admission episode length", FIELD(horizon_hours)));
        t.push_back(entry("grm.reward_b", "tenant B rewards swept", FIELD(reward_b)));
        t.push_back(entry("grm.agents", "greedy, qlearn, dqn, ddqn, oracle", FIELD(agents)));
        t.push_back(entry("grm.train_episodes", "training episodes per agent", FIELD(train_episodes)));
        t.push_back(entry("grm.tabular_train_episodes", "training episodes of the tabular learner",
                          FIELD(tabular_train_episodes)));
        t.push_back(entry("grm.satisfaction_feedback", "append mean satisfaction to the state",
                          FIELD(satisfaction_feedback)));
        t.push_back(entry("grm.onehot_counts", "one-hot occupancy features for network learners",
                          FIELD(onehot_counts)));
        add_learner(t, "grm.learner", &ExperimentConfig::grm);
        t.push_back(entry("run.seeds", "evaluation seeds, ranges as a..b", FIELD(seeds)));
        t.push_back(entry("run.train_seed", "seed of the training episodes", FIELD(train_seed)));
        t.push_back(entry("lrm.revenue_rate.type1", "revenue per satisfaction point, type 1",
                          FIELD(revenue_rate_type1)));
        t.push_back(entry("lrm.revenue_rate.type2", "revenue per satisfaction point, type 2",
                          FIELD(revenue_rate_type2)));
        t.push_back(entry("lrm.unit_cost", "cost per unit added", FIELD(unit_cost)));
        t.push_back(entry("lrm.op_cost", "cost per reconfiguration", FIELD(op_cost)));
        t.push_back(entry("lrm.deltas", "adaptation steps in units per host DC", FIELD(deltas)));
        t.push_back(entry("lrm.satisfaction_bins", "tabular satisfaction bins",
                          FIELD(satisfaction_bins)));
        t.push_back(entry("lrm.train_episodes", "adaptation training episodes",
                          FIELD(lrm_train_episodes)));
        add_learner(t, "lrm.learner", &ExperimentConfig::lrm);
        t.push_back(entry("satisfaction.horizon_s", "episode length", FIELD(satisfaction_horizon_s)));
        t.push_back(entry("satisfaction.agent", "learner of the intelligent framework",
                          FIELD(satisfaction_agent)));
        t.push_back(entry("satisfaction.grm_episodes", "admission training episodes",
                          FIELD(satisfaction_grm_episodes)));
        t.push_back(entry("delay.num_vnfs", "VNF counts swept", FIELD(delay_num_vnfs)));
        t.push_back(entry("delay.agents", "agents timed", FIELD(delay_agents)));
        t.push_back(entry("delay.horizon_s", "episode length per measurement", FIELD(delay_horizon_s)));
        t.push_back(entry("output.log_wallclock", "write measured wallclock into decision logs",
                          FIELD(log_wallclock)));
        t.push_back(entry("output.detail_logs", "decision, adaptation and status logs",
                          FIELD(detail_logs)));
        return t;
    }();
    return entries;
}

#undef FIELD

const Entry& find_entry(const std::string& key) {
    for (const auto& e : table())
        if (e.name == key) return e;
    throw ConfigError("unknown config key '" + key + "'");
}

bool known_agent(const std::string& name) {
    return name == "greedy" || name == "qlearn" || name == "dqn" || name == "ddqn" ||
           name == "oracle";
}

void check(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

} // namespace

std::vector<ConfigKey> config_keys() {
    std::vector<ConfigKey> keys;
    for (const auto& e : table()) keys.push_back({e.name, e.help});
    return keys;
}

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
    find_entry(key).set(config, value);
}

std::string get_config_value(const ExperimentConfig& config, const std::string& key) {
    return find_entry(key).get(config);
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    ExperimentConfig config;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(number) + ": expected key = value");
        try {
            set_config_value(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open config");
    return parse_config(in, path);
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' lacks '='");
    set_config_value(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string serialize_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& e : table()) out += e.name + " = " + e.get(config) + "\n";
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    return sim::fnv1a64(serialize_config(config));
}

void ExperimentConfig::validate() const {
    check(attachment >= 1 && attachment < num_nodes, "infrastructure.attachment must be in [1, num_nodes)");
    check(num_dcs >= 1 && num_dcs <= num_nodes, "infrastructure.num_dcs must be in [1, num_nodes]");
    check(num_inps >= 1, "infrastructure.num_inps must be positive");
    check(dc_capacity > 0, "infrastructure.dc_capacity must be positive");
    check(placement == "spread_then_reuse" || placement == "spread_only",
          "infrastructure.placement must be spread_then_reuse or spread_only");
    check(chain_units == "per_vnf" || chain_units == "per_flow",
          "slicing.chain_units must be per_vnf or per_flow");
    for (const auto* st : {&type1, &type2}) {
        check(st->num_vnfs > 0 && st->flow_arrival_interval > 0 && st->flow_service_time > 0 &&
                  st->units_per_request_per_dc > 0,
              "slice type parameters must be positive");
    }
    for (const auto* t : {&tenant_a, &tenant_b}) {
        check(t->request_rate > 0 && t->completion_rate > 0, "tenant rates must be positive");
        check(t->reward >= 0, "tenant rewards must be non-negative");
        check(t->slice_type == 1 || t->slice_type == 2, "tenant slice_type must be 1 or 2");
    }
    check(measurement_period > 0, "slicing.measurement_period must be positive");
    check(satisfaction_norm >= 0, "slicing.satisfaction_norm must be non-negative");
    check(horizon_hours > 0, "grm.horizon_hours must be positive");
    check(!reward_b.empty(), "grm.reward_b must not be empty");
    for (double r : reward_b) check(r >= 0, "grm.reward_b values must be non-negative");
    check(!agents.empty(), "grm.agents must not be empty");
    for (const auto& a : agents) check(known_agent(a), "unknown agent '" + a + "'");
    for (const auto& a : delay_agents)
        check(known_agent(a) && a != "oracle", "delay.agents: unsupported agent '" + a + "'");
    check(known_agent(satisfaction_agent) && satisfaction_agent != "oracle",
          "satisfaction.agent must be greedy, qlearn, dqn or ddqn");
    check(!seeds.empty(), "run.seeds must not be empty");
    for (const auto* l : {&grm, &lrm}) {
        check(l->gamma >= 0 && l->gamma < 1, "learner gamma must be in [0, 1)");
        check(!l->hidden.empty(), "learner hidden layers must not be empty");
        for (auto h : l->hidden) check(h > 0, "hidden layer widths must be positive");
        check(l->learning_rate > 0 && l->learning_rate_final > 0, "learning rates must be positive");
        check(l->momentum >= 0 && l->momentum < 1, "momentum must be in [0, 1)");
        check(l->batch_size > 0 && l->replay_capacity >= l->batch_size,
              "replay capacity must hold at least one batch");
        check(l->reward_scale >= 0, "reward_scale must be non-negative");
        check(l->reward_centering >= 0 && l->reward_centering <= 1,
              "reward_centering must be in [0, 1]");
        check(l->epsilon_start >= 0 && l->epsilon_start <= 1 && l->epsilon_end >= 0 &&
                  l->epsilon_end <= 1,
              "epsilon values must be in [0, 1]");
        check(l->alpha >= 0 && l->alpha <= 1, "alpha must be in [0, 1]");
        check(l->alpha_decay_visits >= 0, "alpha_decay_visits must be non-negative");
    }
    check(satisfaction_bins > 0, "lrm.satisfaction_bins must be positive");
    try {
        cost_model().validate();
        action_set().validate();
    } catch (const InvalidParams& e) {
        throw ConfigError(e.what());
    }
    check(satisfaction_horizon_s > 0 && delay_horizon_s > 0, "horizons must be positive");
    check(!delay_num_vnfs.empty(), "delay.num_vnfs must not be empty");
    for (auto n : delay_num_vnfs) check(n > 0, "delay.num_vnfs values must be positive");
    if (dc_capacity / type1.units_per_request_per_dc == 0 ||
        dc_capacity / type2.units_per_request_per_dc == 0)
        throw ConfigError("a DC cannot hold a single request");
}

grm::ScenarioConfig ExperimentConfig::scenario(double rb) const {
    grm::ScenarioConfig sc;
    sc.network = infra::BaParams{num_nodes, attachment, num_dcs, num_inps, dc_capacity};
    const auto make_type = [](std::size_t id, const SliceTypeParams& p) {
        return traffic::SliceType{id, p.num_vnfs, p.total_flows, p.flow_arrival_interval,
                                  p.flow_service_time, p.units_per_request_per_dc};
    };
    const auto make_tenant = [&](const char* id, const TenantParams& p) {
        traffic::Tenant t;
        t.id = id;
        t.request_rate = p.request_rate;
        t.completion_rate = p.completion_rate;
        t.immediate_reward = p.reward;
        t.slice_type = p.slice_type == 1 ? make_type(1, type1) : make_type(2, type2);
        return t;
    };
    sc.tenants = {make_tenant("A", tenant_a), make_tenant("B", tenant_b)};
    if (rb >= 0) sc.tenants[1].immediate_reward = rb;
    sc.horizon_s = horizon_hours * kSecondsPerHour;
    sc.placement = placement == "spread_only" ? infra::PlacementPolicy::SpreadOnly
                                              : infra::PlacementPolicy::SpreadThenReuse;
    sc.slicing.chain = chain_units == "per_flow" ? slicing::ChainUnits::PerFlow
                                                 : slicing::ChainUnits::PerVnf;
    sc.slicing.satisfaction_norm = satisfaction_norm;
    sc.slicing.measurement_period = measurement_period;
    sc.satisfaction_feedback = satisfaction_feedback;
    sc.onehot_counts = onehot_counts;
    sc.log_wallclock = log_wallclock;
    return sc;
}

lrm::AdaptCostModel ExperimentConfig::cost_model() const {
    lrm::AdaptCostModel m;
    m.revenue_rate = revenue_rate_type1;
    m.revenue_rate_by_type = {{1, revenue_rate_type1}, {2, revenue_rate_type2}};
    m.unit_cost = unit_cost;
    m.op_cost = op_cost;
    return m;
}

lrm::LrmOptions ExperimentConfig::lrm_options() const {
    lrm::LrmOptions o;
    o.actions = action_set();
    o.costs = cost_model();
    o.satisfaction_bins = satisfaction_bins;
    o.num_slice_types = 2;
    return o;
}

} // namespace slicesim::experiments
