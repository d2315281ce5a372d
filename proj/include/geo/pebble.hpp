#pragma once

#include <vector>

#include "geo/catalog.hpp"
#include "geo/hypergraph.hpp"

namespace geo {

struct PebbleResult {
    std::vector<NodeId> order;          // pebbling sequence
    std::vector<char> pebbled;          // by node id
    std::vector<EdgeId> forward_edges;  // ascending
    std::vector<EdgeId> back_edges;     // ascending
    std::vector<EdgeId> excluded_edges; // disabled rules / unreachable sources
    std::vector<EdgeId> forward_in;     // by node: its forward in-edge or -1
    std::vector<int> depth;             // BFS level; -1 when unpebbled

    bool is_forward(EdgeId e) const {
        return std::binary_search(forward_edges.begin(), forward_edges.end(), e);
    }
    bool is_back(EdgeId e) const {
        return std::binary_search(back_edges.begin(), back_edges.end(), e);
    }
};

/// Two-phase breadth-first pebbling. Phase 1 fires every rule-enabled edge
/// once all its sources are pebbled, level-synchronously, edges in ascending
/// (rule id, source tuple) order within a frontier; an edge whose target is
/// already pebbled is a back-edge, otherwise forward. Phase 2 sweeps the
/// pebbled nodes in reverse order and marks as back any unfired edge whose
/// sources are all pebbled. Writes the direction annotation into h.
PebbleResult pebble(Hypergraph& h, const std::vector<NodeId>& sources, const RuleConfig& cfg);

/// Naive reachability closure (oracle + minimality checks): nodes derivable
/// from the sources via enabled edges.
std::vector<char> reachable_closure(const Hypergraph& h, const std::vector<NodeId>& sources,
                                    const RuleConfig& cfg);

}  // namespace geo
