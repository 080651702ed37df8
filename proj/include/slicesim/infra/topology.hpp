#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "slicesim/core/types.hpp"
#include "slicesim/sim/rng.hpp"

namespace slicesim::infra {

struct DataCenter {
    NodeId id = 0;
    Units capacity = 0;
    Units allocated = 0;
    std::map<SliceId, Units> allocations;

    Units residual() const { return capacity - allocated; }
};

struct BaParams {
    std::size_t num_nodes = 10;
    std::size_t attachment = 2; // m
    std::size_t num_dcs = 5;
    std::size_t num_inps = 2;
    Units dc_capacity = 300;
};

/// Joint physical network of all InPs plus the per-DC capacity ledgers.
class Topology {
public:
    Topology() = default;
    Topology(std::size_t num_nodes, std::vector<std::pair<NodeId, NodeId>> edges,
             std::vector<NodeId> dc_ids, std::vector<std::size_t> inp_of, Units dc_capacity);

    std::size_t num_nodes() const { return num_nodes_; }
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    /// Ascending node ids of the data centers.
    const std::vector<NodeId>& dc_ids() const { return dc_ids_; }
    std::size_t inp_of(NodeId node) const { return inp_of_.at(node); }
    std::size_t degree(NodeId node) const;
    bool connected() const;

    bool is_dc(NodeId node) const;
    const DataCenter& dc(NodeId node) const;
    DataCenter& dc(NodeId node);
    const std::vector<DataCenter>& dcs() const { return dcs_; }

    Units total_allocated() const;

private:
    std::size_t num_nodes_ = 0;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<NodeId> dc_ids_;
    std::vector<std::size_t> inp_of_;
    std::vector<DataCenter> dcs_; // parallel to dc_ids_
};

/// Units requested per DC.
using Demand = std::map<NodeId, Units>;

/// Demand of `units` at every DC of the network.
Demand uniform_demand(const Topology& topology, Units units);

/// Barabási-Albert preferential attachment. The seed is a clique of m nodes;
/// each later node links to m distinct existing nodes chosen with probability
/// proportional to degree. DCs are the num_dcs highest-degree nodes (ties to
/// the lower id); InPs split the node ids into contiguous blocks.
Topology generate_ba_topology(const BaParams& params, sim::RngStream& stream);

bool can_admit(const Topology& topology, const Demand& demand);

/// Reserve `demand` for `slice`. Throws CapacityExceeded (ledgers untouched)
/// when any DC lacks residual.
void allocate(Topology& topology, SliceId slice, const Demand& demand);

/// Change the allocation of `slice` at one DC by `delta` (may be negative).
/// Throws CapacityExceeded if the DC cannot supply a positive delta, and
/// InvalidParams if the slice would drop below zero there.
void adjust(Topology& topology, SliceId slice, NodeId dc, Units delta);

/// Return everything `slice` holds. Returns the total released; 0 if the
/// slice held nothing.
Units release(Topology& topology, SliceId slice);

enum class PlacementPolicy {
    SpreadThenReuse, // distinct DCs while possible, then wrap around
    SpreadOnly,      // distinct DCs or NoFeasiblePlacement
};

struct Placement {
    SliceId slice = 0;
    /// (vnf index, host dc) in VNF order.
    std::vector<std::pair<std::size_t, NodeId>> vnf_hosts;
    Demand units_per_dc;

    /// Distinct host DCs, ascending.
    std::vector<NodeId> host_dcs() const;
};

/// Deterministic first-fit: VNF k goes to the k-th DC (ascending id) whose
/// residual covers the demand there. With SpreadThenReuse, VNFs beyond the
/// number of eligible DCs wrap around to the first eligible DC again.
Placement place_vnfs(const Topology& topology, SliceId slice, std::size_t num_vnfs,
                     const Demand& demand, PlacementPolicy policy);

/// One "u v" line per edge, node ids 0-based.
void write_edge_list(const Topology& topology, std::ostream& out);

} // namespace slicesim::infra
