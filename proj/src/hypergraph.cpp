#include "geo/hypergraph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace geo {

NodeId Hypergraph::add_node(const Prop& p, Provenance prov) {
    auto it = index_.find(p);
    if (it != index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(nodes_.size());
    Node n;
    n.prop = p;
    n.provenance = prov;
    nodes_.push_back(n);
    in_edges_.emplace_back();
    out_edges_.emplace_back();
    index_[p] = id;
    return id;
}

EdgeId Hypergraph::add_edge(std::vector<NodeId> sources, NodeId target, const std::string& rule,
                            RuleFamily family) {
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    if (sources.empty()) throw std::logic_error("edge with no sources");
    for (NodeId s : sources)
        if (s == target) throw std::logic_error("edge source equals target");
    std::string key = rule;
    key += '|';
    for (NodeId s : sources) {
        key += std::to_string(s);
        key += ',';
    }
    key += '>';
    key += std::to_string(target);
    auto [it, inserted] = edge_keys_.emplace(std::move(key), true);
    if (!inserted) return -1;
    Edge e;
    e.sources = std::move(sources);
    e.target = target;
    e.rule = rule;
    e.family = family;
    EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(std::move(e));
    for (NodeId s : edges_[id].sources) out_edges_[s].push_back(id);
    in_edges_[target].push_back(id);
    return id;
}

void Hypergraph::assign_node_types() {
    for (NodeId i = 0; i < static_cast<NodeId>(nodes_.size()); ++i) {
        Node& n = nodes_[i];
        if (n.provenance != Provenance::Derived || in_edges_[i].empty()) {
            n.type = NodeType::Geometric;
            continue;
        }
        bool all_algebraic = true;
        for (EdgeId e : in_edges_[i])
            if (edges_[e].family != RuleFamily::Algebraic) {
                all_algebraic = false;
                break;
            }
        n.type = all_algebraic ? NodeType::Algebraic : NodeType::Geometric;
    }
}

std::string Hypergraph::dump(const Symbols& sym) const {
    std::ostringstream os;
    for (NodeId i = 0; i < static_cast<NodeId>(nodes_.size()); ++i) {
        const Node& n = nodes_[i];
        os << "n" << i << " "
           << (n.type == NodeType::Algebraic ? "algebraic" : "geometric") << " "
           << (n.provenance == Provenance::Intrinsic
                   ? "intrinsic"
                   : n.provenance == Provenance::Assumption ? "assumption" : "derived")
           << " " << prop_to_string(n.prop, sym) << "\n";
    }
    std::vector<EdgeId> order(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<EdgeId>(i);
    std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        const Edge &x = edges_[a], &y = edges_[b];
        if (x.rule != y.rule) return x.rule < y.rule;
        if (x.sources != y.sources) return x.sources < y.sources;
        return x.target < y.target;
    });
    for (EdgeId i : order) {
        const Edge& e = edges_[i];
        os << "e " << e.rule;
        for (NodeId s : e.sources) os << " " << s;
        os << " -> " << e.target << " ";
        switch (e.dir) {
            case EdgeDir::Unset: os << "u"; break;
            case EdgeDir::Forward: os << "f"; break;
            case EdgeDir::Back: os << "b"; break;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace geo
