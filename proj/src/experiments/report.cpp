#include "slicesim/experiments/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "slicesim/core/errors.hpp"

namespace slicesim::experiments {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void line(std::ostream& out, const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    out << buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string(), "cannot create directory: " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(path.string(), "write failed");
}

} // namespace

void write_revenue_csv(const MetricsReport& report, std::ostream& out) {
    out << "agent,reward_b,seed,revenue_total,revenue_per_hour\n";
    for (const auto& r : report.revenue)
        line(out, "%s,%g,%llu,%.6f,%.6f\n", r.agent.c_str(), r.reward_b,
             static_cast<unsigned long long>(r.seed), r.revenue_total, r.revenue_per_hour);
}

void write_revenue_summary_csv(const MetricsReport& report, std::ostream& out) {
    out << "agent,reward_b,mean_revenue_per_hour,std_revenue_per_hour,seeds\n";
    std::vector<std::pair<std::string, double>> order;
    std::map<std::pair<std::string, double>, std::vector<double>> groups;
    for (const auto& r : report.revenue) {
        auto key = std::make_pair(r.agent, r.reward_b);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(r.revenue_per_hour);
    }
    for (const auto& key : order) {
        const auto& xs = groups[key];
        line(out, "%s,%g,%.6f,%.6f,%zu\n", key.first.c_str(), key.second, mean(xs),
             sample_std(xs), xs.size());
    }
}

void write_oracle_csv(const MetricsReport& report, std::ostream& out) {
    out << "reward_b,revenue_per_hour,policy\n";
    for (const auto& r : report.oracle)
        line(out, "%g,%.9f,%s\n", r.reward_b, r.revenue_per_hour, r.policy.c_str());
}

void write_acceptance_csv(const MetricsReport& report, std::ostream& out) {
    out << "agent,reward_b,seed,arrived_a,accepted_a,arrived_b,accepted_b,fraction_a,fraction_b\n";
    for (const auto& r : report.acceptance)
        line(out, "%s,%g,%llu,%zu,%zu,%zu,%zu,%.6f,%.6f\n", r.agent.c_str(), r.reward_b,
             static_cast<unsigned long long>(r.seed), r.arrived.at(0), r.accepted.at(0),
             r.arrived.at(1), r.accepted.at(1), r.fraction(0), r.fraction(1));
}

void write_satisfaction_csv(const MetricsReport& report, std::ostream& out) {
    out << "mode,seed,t_s,mean_satisfaction,active_slices\n";
    for (const auto& p : report.satisfaction_series)
        line(out, "%s,%llu,%.3f,%.6f,%zu\n", p.mode.c_str(),
             static_cast<unsigned long long>(p.seed), p.time, p.mean_satisfaction,
             p.active_slices);
}

void write_satisfaction_summary_csv(const MetricsReport& report, std::ostream& out) {
    out << "mode,seed,mean_satisfaction,records,adapt_events\n";
    for (const auto& s : report.satisfaction)
        line(out, "%s,%llu,%.6f,%zu,%zu\n", s.mode.c_str(), static_cast<unsigned long long>(s.seed),
             s.mean_satisfaction, s.records, s.adapt_events);
}

void write_delay_csv(const MetricsReport& report, std::ostream& out) {
    out << "agent,num_vnfs,definition,median_us,p95_us,samples\n";
    for (const auto& d : report.delay)
        line(out, "%s,%zu,%s,%.4f,%.4f,%zu\n", d.agent.c_str(), d.num_vnfs, d.definition.c_str(),
             d.median_us, d.p95_us, d.samples);
}

std::string manifest_json(const MetricsReport& report, const ExperimentConfig& config,
                          const RunInfo& info, const std::vector<std::string>& files) {
    nlohmann::ordered_json j;
    j["tool"] = "slicesim";
    j["version"] = SLICESIM_VERSION;
    j["experiment"] = info.experiment;
    j["agent"] = info.agent;
    j["config_hash"] = hex64(config_hash(config));
    j["seeds"] = config.seeds;
    j["train_seed"] = config.train_seed;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& key : config_keys()) cfg[key.name] = get_config_value(config, key.name);
    j["config"] = cfg;
    j["files"] = files;
    nlohmann::ordered_json traffic = nlohmann::ordered_json::array();
    for (const auto& t : report.traffic) {
        traffic.push_back({{"agent", t.agent},
                           {"reward_b", t.reward_b},
                           {"seed", t.seed},
                           {"checksum", hex64(t.checksum)}});
    }
    j["traffic_checksums"] = traffic;
    return j.dump(2) + "\n";
}

std::vector<std::string> export_report(const MetricsReport& report, const ExperimentConfig& config,
                                       const RunInfo& info, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec || !fs::is_directory(root))
        throw IoError(out_dir, ec ? "cannot create directory: " + ec.message() : "not a directory");

    std::vector<std::pair<std::string, std::string>> files;
    const auto add = [&](const std::string& name, auto writer) {
        std::ostringstream out;
        writer(report, out);
        files.emplace_back(name, out.str());
    };
    if (report.has_revenue) {
        add("revenue.csv", write_revenue_csv);
        add("revenue_summary.csv", write_revenue_summary_csv);
        add("oracle.csv", write_oracle_csv);
    }
    if (report.has_acceptance) add("acceptance.csv", write_acceptance_csv);
    if (report.has_satisfaction) {
        add("satisfaction.csv", write_satisfaction_csv);
        add("satisfaction_summary.csv", write_satisfaction_summary_csv);
    }
    if (report.has_delay) add("delay.csv", write_delay_csv);
    for (const auto& a : report.attachments) files.emplace_back(a.path, a.content);

    std::vector<std::string> names;
    for (const auto& [name, content] : files) {
        write_file(root / name, content);
        names.push_back(name);
    }
    write_file(root / "manifest.json", manifest_json(report, config, info, names));
    names.push_back("manifest.json");
    return names;
}

} // namespace slicesim::experiments
