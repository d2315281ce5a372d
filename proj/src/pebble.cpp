#include "geo/pebble.hpp"

#include <algorithm>
#include <stdexcept>

namespace geo {

namespace {

bool edge_order_less(const Hypergraph& h, EdgeId a, EdgeId b) {
    const Edge &x = h.edge(a), &y = h.edge(b);
    if (x.rule != y.rule) return x.rule < y.rule;
    std::vector<Prop> xs, ys;
    for (NodeId s : x.sources) xs.push_back(h.node(s).prop);
    for (NodeId s : y.sources) ys.push_back(h.node(s).prop);
    if (xs != ys) return xs < ys;
    return h.node(x.target).prop < h.node(y.target).prop;
}

}  // namespace

PebbleResult pebble(Hypergraph& h, const std::vector<NodeId>& sources, const RuleConfig& cfg) {
    std::size_t n = h.node_count(), m = h.edge_count();
    PebbleResult r;
    r.pebbled.assign(n, 0);
    r.depth.assign(n, -1);
    r.forward_in.assign(n, -1);

    for (NodeId s : sources) {
        if (s < 0 || s >= static_cast<NodeId>(n)) throw std::out_of_range("source node not in graph");
    }

    std::vector<char> rule_excluded(m, 0);
    for (EdgeId e = 0; e < static_cast<EdgeId>(m); ++e) {
        if (!cfg.is_enabled(h.edge(e).rule)) {
            rule_excluded[e] = 1;
            h.edge(e).dir = EdgeDir::Unset;
        }
    }

    std::vector<char> fired(m, 0);
    std::vector<int> missing(m);
    for (EdgeId e = 0; e < static_cast<EdgeId>(m); ++e)
        missing[e] = static_cast<int>(h.edge(e).sources.size());

    // canonical order among the seed sources
    std::vector<NodeId> frontier(sources.begin(), sources.end());
    std::sort(frontier.begin(), frontier.end(),
              [&](NodeId a, NodeId b) { return h.node(a).prop < h.node(b).prop; });
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());

    int level = 0;
    for (NodeId s : frontier) {
        r.pebbled[s] = 1;
        r.depth[s] = 0;
        r.order.push_back(s);
    }

    std::vector<EdgeId> fwd, back;
    while (!frontier.empty()) {
        std::vector<EdgeId> eligible;
        for (NodeId u : frontier)
            for (EdgeId e : h.out_edges(u)) {
                if (rule_excluded[e] || fired[e]) continue;
                if (--missing[e] == 0) eligible.push_back(e);
            }
        std::sort(eligible.begin(), eligible.end(),
                  [&](EdgeId a, EdgeId b) { return edge_order_less(h, a, b); });
        std::vector<NodeId> next;
        ++level;
        for (EdgeId e : eligible) {
            fired[e] = 1;
            NodeId t = h.edge(e).target;
            if (!r.pebbled[t]) {
                fwd.push_back(e);
                h.edge(e).dir = EdgeDir::Forward;
                r.forward_in[t] = e;
                r.pebbled[t] = 1;
                r.depth[t] = level;
                r.order.push_back(t);
                next.push_back(t);
            } else {
                back.push_back(e);
                h.edge(e).dir = EdgeDir::Back;
            }
        }
        frontier = std::move(next);
    }

    // phase 2: reverse pebble order; any unfired edge whose sources are all
    // pebbled is a back-edge (forward assignments are final)
    for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
        for (EdgeId e : h.in_edges(*it)) {
            if (rule_excluded[e] || fired[e]) continue;
            bool all = true;
            for (NodeId s : h.edge(e).sources)
                if (!r.pebbled[s]) { all = false; break; }
            if (all) {
                fired[e] = 1;
                back.push_back(e);
                h.edge(e).dir = EdgeDir::Back;
            }
        }
    }

    for (EdgeId e = 0; e < static_cast<EdgeId>(m); ++e) {
        if (rule_excluded[e]) {
            r.excluded_edges.push_back(e);
        } else if (!fired[e]) {
            r.excluded_edges.push_back(e);  // unreachable under the exclusions
            h.edge(e).dir = EdgeDir::Unset;
        }
    }

    std::sort(fwd.begin(), fwd.end());
    std::sort(back.begin(), back.end());
    r.forward_edges = std::move(fwd);
    r.back_edges = std::move(back);
    return r;
}

std::vector<char> reachable_closure(const Hypergraph& h, const std::vector<NodeId>& sources,
                                    const RuleConfig& cfg) {
    std::size_t n = h.node_count(), m = h.edge_count();
    std::vector<char> in(n, 0);
    for (NodeId s : sources) in[s] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (EdgeId e = 0; e < static_cast<EdgeId>(m); ++e) {
            const Edge& ed = h.edge(e);
            if (!cfg.is_enabled(ed.rule) || in[ed.target]) continue;
            bool all = true;
            for (NodeId s : ed.sources)
                if (!in[s]) { all = false; break; }
            if (all) {
                in[ed.target] = 1;
                changed = true;
            }
        }
    }
    return in;
}

}  // namespace geo
