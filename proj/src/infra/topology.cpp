#include "slicesim/infra/topology.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "slicesim/core/errors.hpp"

namespace slicesim::infra {

Topology::Topology(std::size_t num_nodes, std::vector<std::pair<NodeId, NodeId>> edges,
                   std::vector<NodeId> dc_ids, std::vector<std::size_t> inp_of, Units dc_capacity)
    : num_nodes_(num_nodes), edges_(std::move(edges)), dc_ids_(std::move(dc_ids)),
      inp_of_(std::move(inp_of)) {
    std::sort(dc_ids_.begin(), dc_ids_.end());
    if (std::adjacent_find(dc_ids_.begin(), dc_ids_.end()) != dc_ids_.end())
        throw InvalidParams("duplicate DC id");
    if (inp_of_.size() != num_nodes_) throw InvalidParams("inp_of must cover every node");
    for (auto [u, v] : edges_) {
        if (u >= num_nodes_ || v >= num_nodes_) throw InvalidParams("edge endpoint out of range");
    }
    dcs_.reserve(dc_ids_.size());
    for (NodeId id : dc_ids_) {
        if (id >= num_nodes_) throw InvalidParams("DC id out of range");
        dcs_.push_back(DataCenter{id, dc_capacity, 0, {}});
    }
}

std::size_t Topology::degree(NodeId node) const {
    std::size_t d = 0;
    for (auto [u, v] : edges_) d += (u == node) + (v == node);
    return d;
}

bool Topology::connected() const {
    if (num_nodes_ == 0) return true;
    std::vector<std::vector<NodeId>> adj(num_nodes_);
    for (auto [u, v] : edges_) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(num_nodes_, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == num_nodes_;
}

bool Topology::is_dc(NodeId node) const {
    return std::binary_search(dc_ids_.begin(), dc_ids_.end(), node);
}

const DataCenter& Topology::dc(NodeId node) const {
    auto it = std::lower_bound(dc_ids_.begin(), dc_ids_.end(), node);
    if (it == dc_ids_.end() || *it != node)
        throw InvalidParams("node " + std::to_string(node) + " is not a DC");
    return dcs_[static_cast<std::size_t>(it - dc_ids_.begin())];
}

DataCenter& Topology::dc(NodeId node) {
    return const_cast<DataCenter&>(std::as_const(*this).dc(node));
}

Units Topology::total_allocated() const {
    Units total = 0;
    for (const auto& d : dcs_) total += d.allocated;
    return total;
}

Demand uniform_demand(const Topology& topology, Units units) {
    Demand demand;
    for (NodeId id : topology.dc_ids()) demand[id] = units;
    return demand;
}

Topology generate_ba_topology(const BaParams& p, sim::RngStream& stream) {
    if (p.attachment < 1 || p.attachment >= p.num_nodes)
        throw InvalidParams("BA topology needs 1 <= m < n");
    if (p.num_dcs > p.num_nodes) throw InvalidParams("more DCs than nodes");
    if (p.num_inps < 1) throw InvalidParams("need at least one InP");
    if (p.dc_capacity < 0) throw InvalidParams("negative DC capacity");

    const std::size_t m = p.attachment;
    std::vector<std::pair<NodeId, NodeId>> edges;
    // Every edge endpoint appears once here, so a uniform pick is a
    // degree-proportional pick.
    std::vector<NodeId> endpoints;

    for (NodeId u = 0; u < m; ++u) {
        for (NodeId v = u + 1; v < m; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    for (NodeId node = static_cast<NodeId>(m); node < p.num_nodes; ++node) {
        std::set<NodeId> targets;
        while (targets.size() < m) {
            NodeId t;
            if (endpoints.empty()) {
                // m == 1 seed has no edges yet.
                t = static_cast<NodeId>(stream.uniform_index(node));
            } else {
                t = endpoints[stream.uniform_index(endpoints.size())];
            }
            targets.insert(t);
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, node);
            endpoints.push_back(t);
            endpoints.push_back(node);
        }
    }

    std::vector<std::size_t> degree(p.num_nodes, 0);
    for (auto [u, v] : edges) {
        ++degree[u];
        ++degree[v];
    }
    std::vector<NodeId> order(p.num_nodes);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return degree[a] > degree[b]; });
    std::vector<NodeId> dc_ids(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p.num_dcs));

    std::vector<std::size_t> inp_of(p.num_nodes);
    for (std::size_t v = 0; v < p.num_nodes; ++v) inp_of[v] = v * p.num_inps / p.num_nodes;

    return Topology(p.num_nodes, std::move(edges), std::move(dc_ids), std::move(inp_of),
                    p.dc_capacity);
}

bool can_admit(const Topology& topology, const Demand& demand) {
    for (auto [id, units] : demand) {
        if (units < 0) return false;
        if (topology.dc(id).residual() < units) return false;
    }
    return true;
}

void allocate(Topology& topology, SliceId slice, const Demand& demand) {
    if (!can_admit(topology, demand))
        throw CapacityExceeded("allocation for slice " + std::to_string(slice) +
                               " exceeds residual capacity");
    for (auto [id, units] : demand) {
        auto& d = topology.dc(id);
        d.allocated += units;
        d.allocations[slice] += units;
    }
}

void adjust(Topology& topology, SliceId slice, NodeId id, Units delta) {
    auto& d = topology.dc(id);
    if (delta > 0 && d.residual() < delta)
        throw CapacityExceeded("DC " + std::to_string(id) + " lacks " + std::to_string(delta) +
                               " units");
    auto it = d.allocations.find(slice);
    Units held = it == d.allocations.end() ? 0 : it->second;
    if (held + delta < 0) throw InvalidParams("slice allocation would become negative");
    d.allocated += delta;
    if (held + delta == 0) {
        if (it != d.allocations.end()) d.allocations.erase(it);
    } else {
        d.allocations[slice] = held + delta;
    }
}

Units release(Topology& topology, SliceId slice) {
    Units total = 0;
    for (NodeId id : topology.dc_ids()) {
        auto& d = topology.dc(id);
        auto it = d.allocations.find(slice);
        if (it == d.allocations.end()) continue;
        d.allocated -= it->second;
        total += it->second;
        d.allocations.erase(it);
    }
    return total;
}

std::vector<NodeId> Placement::host_dcs() const {
    std::vector<NodeId> hosts;
    for (auto [k, dc] : vnf_hosts) hosts.push_back(dc);
    std::sort(hosts.begin(), hosts.end());
    hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
    return hosts;
}

Placement place_vnfs(const Topology& topology, SliceId slice, std::size_t num_vnfs,
                     const Demand& demand, PlacementPolicy policy) {
    Placement placement;
    placement.slice = slice;
    placement.units_per_dc = demand;
    if (num_vnfs == 0) return placement;

    std::vector<NodeId> eligible;
    for (NodeId id : topology.dc_ids()) {
        auto it = demand.find(id);
        Units need = it == demand.end() ? 0 : it->second;
        if (topology.dc(id).residual() >= need) eligible.push_back(id);
    }
    if (eligible.empty()) throw NoFeasiblePlacement("no DC can host a VNF");
    if (policy == PlacementPolicy::SpreadOnly && eligible.size() < num_vnfs)
        throw NoFeasiblePlacement("only " + std::to_string(eligible.size()) + " DCs for " +
                                  std::to_string(num_vnfs) + " VNFs");
    for (std::size_t k = 0; k < num_vnfs; ++k)
        placement.vnf_hosts.emplace_back(k, eligible[k % eligible.size()]);
    return placement;
}

void write_edge_list(const Topology& topology, std::ostream& out) {
    for (auto [u, v] : topology.edges()) out << u << ' ' << v << '\n';
}

} // namespace slicesim::infra
