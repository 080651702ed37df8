#include "slicesim/agents/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

namespace {

void write_values(std::ostream& out, const char* tag, std::span<const double> values) {
    out << tag << ' ' << values.size() << '\n';
    char buf[40];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
}

void read_values(std::istream& in, const char* tag, std::span<double> values) {
    std::string word;
    std::size_t count = 0;
    if (!(in >> word >> count) || word != tag || count != values.size())
        throw InvalidParams(std::string("checkpoint: bad '") + tag + "' section");
    for (double& v : values)
        if (!(in >> v)) throw InvalidParams("checkpoint: truncated weights");
}

} // namespace

void write_checkpoint(const QNetwork& net, std::ostream& out) {
    out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
    const auto& sizes = net.online().sizes();
    out << "sizes " << sizes.size();
    for (auto s : sizes) out << ' ' << s;
    out << '\n';
    write_values(out, "online", net.online().params());
    write_values(out, "target", net.target().params());
}

QNetwork read_checkpoint(std::istream& in) {
    std::string magic, word;
    int version = 0;
    if (!(in >> magic >> version) || magic != kCheckpointMagic)
        throw InvalidParams("checkpoint: missing header");
    if (version != kCheckpointVersion)
        throw InvalidParams("checkpoint: unsupported version " + std::to_string(version));
    std::size_t n = 0;
    if (!(in >> word >> n) || word != "sizes" || n < 2)
        throw InvalidParams("checkpoint: bad layer sizes");
    std::vector<std::size_t> sizes(n);
    for (auto& s : sizes)
        if (!(in >> s) || s == 0) throw InvalidParams("checkpoint: bad layer size");
    std::vector<std::size_t> hidden(sizes.begin() + 1, sizes.end() - 1);
    QNetwork net(sizes.front(), sizes.back(), hidden);
    read_values(in, "online", net.online().params());
    read_values(in, "target", net.target().params());
    return net;
}

void save_checkpoint(const QNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path, "cannot open for writing");
    write_checkpoint(net, out);
    if (!out) throw IoError(path, "write failed");
}

QNetwork load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");
    return read_checkpoint(in);
}

QTable read_qtable_csv(std::istream& in, StepSchedule schedule, double gamma) {
    std::string line;
    if (!std::getline(in, line) || line != "state,action,value")
        throw InvalidParams("Q-table CSV: missing header");
    struct Row {
        std::size_t s, a;
        double v;
    };
    std::vector<Row> rows;
    std::size_t max_s = 0, max_a = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row r{};
        if (std::sscanf(line.c_str(), "%zu,%zu,%lf", &r.s, &r.a, &r.v) != 3)
            throw InvalidParams("Q-table CSV: bad row '" + line + "'");
        max_s = std::max(max_s, r.s);
        max_a = std::max(max_a, r.a);
        rows.push_back(r);
    }
    if (rows.empty()) throw InvalidParams("Q-table CSV: no rows");
    QTable table(max_s + 1, max_a + 1, schedule, gamma);
    for (const auto& r : rows) table.set(r.s, r.a, r.v);
    return table;
}

} // namespace slicesim::agents
