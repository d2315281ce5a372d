#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "geo/prop.hpp"

namespace geo {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

enum class Provenance : std::uint8_t { Intrinsic, Assumption, Derived };
enum class NodeType : std::uint8_t { Algebraic, Geometric };
enum class RuleFamily : std::uint8_t { Axiom, Algebraic, Definition, Theorem };
enum class EdgeDir : std::uint8_t { Unset, Forward, Back };

struct Node {
    Prop prop;
    Provenance provenance = Provenance::Derived;
    NodeType type = NodeType::Geometric;
    std::int32_t alg_depth = 0;  // consecutive algebraic steps below this node
};

struct Edge {
    std::vector<NodeId> sources;  // sorted, distinct
    NodeId target = -1;
    std::string rule;
    RuleFamily family = RuleFamily::Axiom;
    EdgeDir dir = EdgeDir::Unset;
};

/// Typed deduction hypergraph: canonical propositions as nodes, many-to-one
/// justified hyperedges. Immutable once saturation finishes, except for the
/// pebbling direction annotation.
class Hypergraph {
  public:
    NodeId find(const Prop& p) const {
        auto it = index_.find(p);
        return it == index_.end() ? -1 : it->second;
    }
    bool contains(const Prop& p) const { return find(p) >= 0; }

    NodeId add_node(const Prop& p, Provenance prov);
    /// Adds edge if not already present; sources are deduplicated and sorted.
    EdgeId add_edge(std::vector<NodeId> sources, NodeId target, const std::string& rule,
                    RuleFamily family);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    Node& node(NodeId i) { return nodes_[i]; }
    const Node& node(NodeId i) const { return nodes_[i]; }
    Edge& edge(EdgeId i) { return edges_[i]; }
    const Edge& edge(EdgeId i) const { return edges_[i]; }
    const std::vector<EdgeId>& in_edges(NodeId n) const { return in_edges_[n]; }
    const std::vector<EdgeId>& out_edges(NodeId n) const { return out_edges_[n]; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    /// Node typing: a derived node with every in-edge algebraic is algebraic;
    /// everything else (and every intrinsic/assumption node) is geometric.
    void assign_node_types();
    NodeType node_type(NodeId n) const { return nodes_[n].type; }

    std::string dump(const Symbols& sym) const;

    std::uint32_t warnings_capped = 0;  // rule instances suppressed by algebraic caps

  private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> in_edges_;
    std::vector<std::vector<EdgeId>> out_edges_;
    std::unordered_map<Prop, NodeId, PropHash> index_;
    std::unordered_map<std::string, bool> edge_keys_;
};

}  // namespace geo
