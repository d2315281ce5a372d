#include "geo/analogy.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace geo {

namespace {

struct NodeSig {
    NodeType type;
    int in_deg = 0, out_deg = 0;
    friend auto operator<=>(const NodeSig&, const NodeSig&) = default;
};

std::vector<NodeSig> signatures(const InducedGraph& g) {
    std::vector<NodeSig> sig(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) sig[i].type = g.types[i];
    for (const auto& [srcs, tgt] : g.edges) {
        sig[tgt].in_deg++;
        for (int s : srcs) sig[s].out_deg++;
    }
    return sig;
}

// per-edge key under a complete mapping: (mapped sorted sources, mapped target)
bool edges_match(const InducedGraph& a, const InducedGraph& b, const std::vector<int>& map_ab) {
    std::multiset<std::pair<std::vector<int>, int>> eb;
    for (const auto& [srcs, tgt] : b.edges) {
        std::vector<int> s = srcs;
        std::sort(s.begin(), s.end());
        eb.insert({s, tgt});
    }
    for (const auto& [srcs, tgt] : a.edges) {
        std::vector<int> s;
        for (int x : srcs) s.push_back(map_ab[x]);
        std::sort(s.begin(), s.end());
        auto it = eb.find({s, map_ab[tgt]});
        if (it == eb.end()) return false;
        eb.erase(it);
    }
    return eb.empty();
}

// per-type source counts of every edge must agree under the mapping
bool edge_type_counts_ok(const InducedGraph& a, const InducedGraph& b,
                         const std::vector<int>& map_ab) {
    auto counts = [](const InducedGraph& g, const std::vector<int>& srcs) {
        int alg = 0, geo_n = 0;
        for (int s : srcs)
            (g.types[s] == NodeType::Algebraic ? alg : geo_n)++;
        return std::pair<int, int>(alg, geo_n);
    };
    std::multimap<std::pair<std::vector<int>, int>, const std::vector<int>*> eb;
    for (const auto& [srcs, tgt] : b.edges) {
        std::vector<int> s = srcs;
        std::sort(s.begin(), s.end());
        eb.insert({{s, tgt}, &srcs});
    }
    for (const auto& [srcs, tgt] : a.edges) {
        std::vector<int> s;
        for (int x : srcs) s.push_back(map_ab[x]);
        std::sort(s.begin(), s.end());
        auto it = eb.find({s, map_ab[tgt]});
        if (it == eb.end()) return false;
        if (counts(a, srcs) != counts(b, *it->second)) return false;
        eb.erase(it);
    }
    return true;
}

struct IsoSearch {
    const InducedGraph &a, &b;
    std::vector<NodeSig> sa, sb;
    std::vector<int> map_ab, map_ba;
    // candidate lists per a-node, grouped by signature
    bool found = false;

    IsoSearch(const InducedGraph& a_, const InducedGraph& b_) : a(a_), b(b_) {
        sa = signatures(a);
        sb = signatures(b);
        map_ab.assign(a.nodes.size(), -1);
        map_ba.assign(b.nodes.size(), -1);
    }

    bool run() {
        dfs(0);
        return found;
    }

    void dfs(std::size_t i) {
        if (found) return;
        if (i == a.nodes.size()) {
            if (edges_match(a, b, map_ab) && edge_type_counts_ok(a, b, map_ab)) found = true;
            return;
        }
        for (std::size_t j = 0; j < b.nodes.size(); ++j) {
            if (map_ba[j] >= 0 || sa[i] != sb[j]) continue;
            map_ab[i] = static_cast<int>(j);
            map_ba[j] = static_cast<int>(i);
            if (partial_ok(i)) dfs(i + 1);
            map_ab[i] = -1;
            map_ba[j] = -1;
            if (found) return;
        }
    }

    // quick prune: edges fully inside the mapped prefix must match
    bool partial_ok(std::size_t upto) {
        for (const auto& [srcs, tgt] : a.edges) {
            bool all_mapped = map_ab[tgt] >= 0 && static_cast<std::size_t>(tgt) <= upto;
            for (int s : srcs)
                if (map_ab[s] < 0) all_mapped = false;
            if (!all_mapped || map_ab[tgt] < 0) continue;
            std::vector<int> ms;
            for (int s : srcs) ms.push_back(map_ab[s]);
            std::sort(ms.begin(), ms.end());
            bool ok = false;
            for (const auto& [bs, bt] : b.edges) {
                if (bt != map_ab[tgt]) continue;
                std::vector<int> sb2 = bs;
                std::sort(sb2.begin(), sb2.end());
                if (sb2 == ms) { ok = true; break; }
            }
            if (!ok) return false;
        }
        return true;
    }
};

}  // namespace

bool coarse_necessary(const InducedGraph& a, const InducedGraph& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
    auto sa = signatures(a), sb = signatures(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa == sb;
}

bool coarsely_analogous(const InducedGraph& a, const InducedGraph& b, int node_cap) {
    if (!coarse_necessary(a, b)) return false;
    if (static_cast<int>(a.nodes.size()) > node_cap) return false;  // strict classes only
    IsoSearch s(a, b);
    return s.run();
}

AnalogyReport partition(const Synthesis& syn, const std::vector<int>& problem_indices,
                        int node_cap) {
    AnalogyReport rep;
    // goal classes: quotient by goal kind
    std::map<PropKind, std::vector<int>> by_kind;
    for (int idx : problem_indices)
        by_kind[goal_type(syn.graph.node(syn.problems[idx].goal).prop)].push_back(idx);
    for (auto& [k, v] : by_kind) rep.goal_classes.push_back(v);

    // coarse classes: union of pairwise isomorphism within necessary-filter buckets
    std::vector<InducedGraph> graphs;
    graphs.reserve(problem_indices.size());
    for (int idx : problem_indices) graphs.push_back(induced(syn.graph, syn.problems[idx]));

    std::vector<int> parent(problem_indices.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (std::size_t i = 0; i < graphs.size(); ++i) {
        if (static_cast<int>(graphs[i].nodes.size()) > node_cap) {
            rep.oversize.push_back(problem_indices[i]);
            continue;
        }
        for (std::size_t j = i + 1; j < graphs.size(); ++j) {
            if (find(static_cast<int>(i)) == find(static_cast<int>(j))) continue;
            if (static_cast<int>(graphs[j].nodes.size()) > node_cap) continue;
            if (coarsely_analogous(graphs[i], graphs[j], node_cap))
                parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
        }
    }
    std::map<int, std::vector<int>> classes;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        if (static_cast<int>(graphs[i].nodes.size()) > node_cap) continue;
        classes[find(static_cast<int>(i))].push_back(problem_indices[i]);
    }
    for (auto& [r, v] : classes) rep.coarse_classes.push_back(v);
    std::sort(rep.coarse_classes.begin(), rep.coarse_classes.end());
    std::sort(rep.goal_classes.begin(), rep.goal_classes.end());
    return rep;
}

}  // namespace geo
