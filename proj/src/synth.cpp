#include "geo/synth.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geo {

namespace {

bool edge_canonical_less(const Hypergraph& h, EdgeId a, EdgeId b) {
    const Edge &x = h.edge(a), &y = h.edge(b);
    if (x.rule != y.rule) return x.rule < y.rule;
    std::vector<Prop> xs, ys;
    for (NodeId s : x.sources) xs.push_back(h.node(s).prop);
    for (NodeId s : y.sources) ys.push_back(h.node(s).prop);
    if (xs != ys) return xs < ys;
    return h.node(x.target).prop < h.node(y.target).prop;
}

std::vector<EdgeId> topo_sort_solution(const Hypergraph& h, const std::vector<NodeId>& sources,
                                       std::vector<EdgeId> edges) {
    std::set<NodeId> have(sources.begin(), sources.end());
    for (std::size_t i = 0; i < h.node_count(); ++i)
        if (h.node(static_cast<NodeId>(i)).provenance == Provenance::Intrinsic)
            have.insert(static_cast<NodeId>(i));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<EdgeId> out;
    std::vector<char> placed(edges.size(), 0);
    for (std::size_t round = 0; round < edges.size(); ++round) {
        EdgeId best = -1;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (placed[i]) continue;
            bool ready = true;
            for (NodeId s : h.edge(edges[i]).sources)
                if (!have.count(s)) { ready = false; break; }
            if (!ready) continue;
            if (best < 0 || edge_canonical_less(h, edges[i], best)) {
                best = edges[i];
                best_i = i;
            }
        }
        if (best < 0) return {};  // cyclic or missing premises
        placed[best_i] = 1;
        out.push_back(best);
        have.insert(h.edge(best).target);
    }
    return out;
}

}  // namespace

AssumptionClosure assumption_closure(const Hypergraph& h,
                                     const std::vector<NodeId>& assumption_nodes,
                                     const RuleConfig& cfg) {
    AssumptionClosure c;
    std::size_t n = h.node_count();
    c.member.assign(n, 0);
    c.used.assign(n, {});
    std::vector<char> avail(n, 0);  // member or intrinsic
    for (std::size_t i = 0; i < n; ++i)
        if (h.node(static_cast<NodeId>(i)).provenance == Provenance::Intrinsic) avail[i] = 1;
    for (std::size_t i = 0; i < assumption_nodes.size(); ++i) {
        NodeId a = assumption_nodes[i];
        c.member[a] = 1;
        avail[a] = 1;
        c.used[a] = {static_cast<int>(i)};
    }
    std::vector<EdgeId> def_edges;
    for (EdgeId e = 0; e < static_cast<EdgeId>(h.edge_count()); ++e)
        if (h.edge(e).family == RuleFamily::Definition && cfg.is_enabled(h.edge(e).rule))
            def_edges.push_back(e);
    std::sort(def_edges.begin(), def_edges.end(),
              [&](EdgeId a, EdgeId b) { return edge_canonical_less(h, a, b); });
    bool changed = true;
    while (changed) {
        changed = false;
        for (EdgeId e : def_edges) {
            const Edge& ed = h.edge(e);
            if (avail[ed.target]) continue;
            bool all = true;
            for (NodeId s : ed.sources)
                if (!avail[s]) { all = false; break; }
            if (!all) continue;
            avail[ed.target] = 1;
            c.member[ed.target] = 1;
            std::set<int> u;
            for (NodeId s : ed.sources) u.insert(c.used[s].begin(), c.used[s].end());
            c.used[ed.target].assign(u.begin(), u.end());
            changed = true;
        }
    }
    return c;
}

namespace {

struct Option {
    std::vector<NodeId> sources;  // sorted
    std::vector<EdgeId> edges;    // unsorted union
};

class Composer {
  public:
    Composer(const Hypergraph& h, const PebbleResult& pr, const SynthBudget& budget)
        : h_(h), pr_(pr), budget_(budget), memo_(h.node_count()), done_(h.node_count(), 0) {}

    const std::vector<Option>& options(NodeId n) {
        if (done_[n]) return memo_[n];
        done_[n] = 1;  // set first: forward edges are acyclic, this guards misuse
        std::vector<Option>& out = memo_[n];
        if (h_.node(n).provenance == Provenance::Intrinsic) {
            out.push_back(Option{});
            return out;
        }
        out.push_back(Option{{n}, {}});
        EdgeId e = pr_.forward_in[n];
        if (e >= 0) {
            const Edge& ed = h_.edge(e);
            std::vector<const std::vector<Option>*> lists;
            for (NodeId s : ed.sources) lists.push_back(&options(s));
            // odometer over premise options, lexicographic, bounded pool
            std::vector<std::size_t> idx(lists.size(), 0);
            int emitted = 0;
            const int pool_cap = budget_.max_per_goal * 4;
            while (emitted < pool_cap) {
                Option o;
                std::set<NodeId> src;
                std::set<EdgeId> eds;
                for (std::size_t i = 0; i < lists.size(); ++i) {
                    const Option& po = (*lists[i])[idx[i]];
                    src.insert(po.sources.begin(), po.sources.end());
                    eds.insert(po.edges.begin(), po.edges.end());
                }
                eds.insert(e);
                o.sources.assign(src.begin(), src.end());
                o.edges.assign(eds.begin(), eds.end());
                if (!o.sources.empty() || h_.node(n).provenance == Provenance::Derived) {
                    if (!std::count(o.sources.begin(), o.sources.end(), n)) out.push_back(std::move(o));
                }
                ++emitted;
                // advance odometer
                std::size_t k = 0;
                for (; k < idx.size(); ++k) {
                    if (idx[k] + 1 < lists[k]->size()) {
                        ++idx[k];
                        std::fill(idx.begin(), idx.begin() + k, 0);
                        break;
                    }
                }
                if (k == idx.size()) break;
            }
        }
        // dedupe by source set, prefer fewer sources then shorter solutions
        std::stable_sort(out.begin(), out.end(), [](const Option& a, const Option& b) {
            if (a.sources.size() != b.sources.size()) return a.sources.size() < b.sources.size();
            if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
            return a.sources < b.sources;
        });
        std::vector<Option> dedup;
        std::set<std::vector<NodeId>> seen;
        for (auto& o : out) {
            if (seen.insert(o.sources).second) dedup.push_back(std::move(o));
            if (static_cast<int>(dedup.size()) >= budget_.max_per_goal) break;
        }
        out = std::move(dedup);
        return out;
    }

  private:
    const Hypergraph& h_;
    const PebbleResult& pr_;
    const SynthBudget& budget_;
    std::vector<std::vector<Option>> memo_;
    std::vector<char> done_;
};

Problem make_problem(const Hypergraph& h, std::vector<NodeId> sources, NodeId goal,
                     std::vector<EdgeId> edges) {
    Problem p;
    p.sources = std::move(sources);
    std::sort(p.sources.begin(), p.sources.end());
    p.goal = goal;
    p.solution = topo_sort_solution(h, p.sources, std::move(edges));
    return p;
}

}  // namespace

std::vector<Problem> enumerate_problems(const Hypergraph& h, const PebbleResult& pr, NodeId goal,
                                        const SynthBudget& budget, const RuleConfig& cfg) {
    (void)cfg;
    if (goal < 0 || goal >= static_cast<NodeId>(h.node_count()))
        throw std::out_of_range("goal not in graph");
    if (!pr.pebbled[goal]) throw std::runtime_error("goal unreachable");
    std::vector<Problem> out;
    if (h.node(goal).provenance != Provenance::Derived) return out;
    Composer comp(h, pr, budget);
    for (const Option& o : comp.options(goal)) {
        if (o.edges.empty()) continue;  // identity option
        Problem p = make_problem(h, o.sources, goal, o.edges);
        if (p.solution.empty() && !o.edges.empty()) continue;
        p.metrics = metrics(h, p);
        out.push_back(std::move(p));
    }
    return out;
}

bool is_minimal(const Hypergraph& h, const std::vector<NodeId>& S, NodeId g,
                const RuleConfig& cfg) {
    std::vector<NodeId> base;
    for (std::size_t i = 0; i < h.node_count(); ++i)
        if (h.node(static_cast<NodeId>(i)).provenance == Provenance::Intrinsic)
            base.push_back(static_cast<NodeId>(i));
    auto derives = [&](const std::vector<NodeId>& srcs) {
        std::vector<NodeId> all = base;
        all.insert(all.end(), srcs.begin(), srcs.end());
        return reachable_closure(h, all, cfg)[g] != 0;
    };
    if (!derives(S)) throw std::runtime_error("sources do not derive the goal");
    for (std::size_t i = 0; i < S.size(); ++i) {
        std::vector<NodeId> reduced;
        for (std::size_t j = 0; j < S.size(); ++j)
            if (j != i) reduced.push_back(S[j]);
        if (derives(reduced)) return false;
    }
    return true;
}

void classify(const Hypergraph& h, Problem& p, const AssumptionClosure& closure,
              int assumption_count, const RuleConfig& cfg) {
    p.interesting = false;
    p.strictly_interesting = false;
    p.used_assumptions.clear();
    bool subset_ok = true;
    std::set<int> used;
    for (NodeId s : p.sources) {
        if (!closure.member[s]) {
            subset_ok = false;
            break;
        }
        used.insert(closure.used[s].begin(), closure.used[s].end());
    }
    if (!subset_ok) used.clear();
    p.used_assumptions.assign(used.begin(), used.end());
    if (p.converse) return;
    if (!subset_ok || used.empty()) return;
    // (ii) direct predecessors of the goal along this solution are not algebraic
    for (EdgeId e : p.solution) {
        if (h.edge(e).target != p.goal) continue;
        for (NodeId s : h.edge(e).sources)
            if (h.node(s).type == NodeType::Algebraic) return;
    }
    // (i) minimality
    if (!is_minimal(h, p.sources, p.goal, cfg)) return;
    p.interesting = true;
    p.strictly_interesting = static_cast<int>(used.size()) == assumption_count;
}

std::vector<Problem> converse_problems(const Hypergraph& h, const PebbleResult& pr,
                                       const std::vector<NodeId>& assumption_nodes,
                                       const SynthBudget& budget, const RuleConfig& cfg) {
    (void)pr;
    std::vector<Problem> out;
    std::set<NodeId> assumption_set(assumption_nodes.begin(), assumption_nodes.end());
    for (NodeId a : assumption_nodes) {
        struct Partial {
            std::set<NodeId> sources;
            std::set<EdgeId> edges;
            int depth = 0;
        };
        std::vector<Partial> frontier;
        std::map<std::vector<NodeId>, Partial> found;  // by sorted source set
        for (EdgeId e : h.in_edges(a)) {
            if (h.edge(e).dir != EdgeDir::Back) continue;
            Partial p0;
            p0.edges.insert(e);
            for (NodeId s : h.edge(e).sources)
                if (h.node(s).provenance != Provenance::Intrinsic) p0.sources.insert(s);
            if (p0.sources.empty() || p0.sources.count(a)) continue;
            frontier.push_back(std::move(p0));
        }
        const std::size_t beam = 512;
        int level = 0;
        while (!frontier.empty() && level <= budget.converse_depth) {
            ++level;
            std::vector<Partial> next;
            for (Partial& cur : frontier) {
                std::vector<NodeId> key(cur.sources.begin(), cur.sources.end());
                auto it = found.find(key);
                if (it == found.end()) found.emplace(std::move(key), cur);
                if (cur.depth >= budget.converse_depth) continue;
                // expand each derived source through one of its in-edges
                for (NodeId q : cur.sources) {
                    if (assumption_set.count(q)) continue;
                    std::vector<EdgeId> ins(h.in_edges(q).begin(), h.in_edges(q).end());
                    std::sort(ins.begin(), ins.end(),
                              [&](EdgeId x, EdgeId y) { return edge_canonical_less(h, x, y); });
                    for (EdgeId f : ins) {
                        if (!cfg.is_enabled(h.edge(f).rule)) continue;
                        if (cur.edges.count(f)) continue;
                        const Edge& fe = h.edge(f);
                        bool ok = fe.target != a;
                        for (NodeId s : fe.sources)
                            if (s == a) ok = false;
                        if (!ok) continue;
                        Partial nxt;
                        nxt.depth = cur.depth + 1;
                        nxt.edges = cur.edges;
                        nxt.edges.insert(f);
                        nxt.sources = cur.sources;
                        nxt.sources.erase(q);
                        for (NodeId s : fe.sources)
                            if (h.node(s).provenance != Provenance::Intrinsic) nxt.sources.insert(s);
                        // a chosen edge's target must not double as a source
                        for (EdgeId g2 : nxt.edges)
                            if (nxt.sources.count(h.edge(g2).target)) ok = false;
                        if (ok) next.push_back(std::move(nxt));
                    }
                }
            }
            // keep the next level small, preferring small source sets
            std::sort(next.begin(), next.end(), [&](const Partial& x, const Partial& y) {
                if (x.sources.size() != y.sources.size()) return x.sources.size() < y.sources.size();
                if (x.edges.size() != y.edges.size()) return x.edges.size() < y.edges.size();
                std::vector<Prop> xs, ys;
                for (NodeId s : x.sources) xs.push_back(h.node(s).prop);
                for (NodeId s : y.sources) ys.push_back(h.node(s).prop);
                return xs < ys;
            });
            if (next.size() > beam) next.resize(beam);
            frontier = std::move(next);
        }
        std::vector<Problem> acc;
        for (auto& [key, cur] : found) {
            Problem p = make_problem(h, key, a,
                                     std::vector<EdgeId>(cur.edges.begin(), cur.edges.end()));
            bool has_derived = false;
            for (NodeId s : p.sources)
                if (!assumption_set.count(s)) has_derived = true;
            if (!has_derived || p.solution.empty()) continue;
            p.converse = true;
            p.metrics = metrics(h, p);
            acc.push_back(std::move(p));
        }
        std::sort(acc.begin(), acc.end(), [&](const Problem& x, const Problem& y) {
            if (x.sources.size() != y.sources.size()) return x.sources.size() < y.sources.size();
            if (x.solution.size() != y.solution.size()) return x.solution.size() < y.solution.size();
            std::vector<Prop> xs, ys;
            for (NodeId s : x.sources) xs.push_back(h.node(s).prop);
            for (NodeId s : y.sources) ys.push_back(h.node(s).prop);
            return xs < ys;
        });
        if (static_cast<int>(acc.size()) > budget.max_per_goal) acc.resize(budget.max_per_goal);
        for (auto& p : acc) out.push_back(std::move(p));
    }
    return out;
}

InducedGraph induced(const Hypergraph& h, const Problem& p) {
    InducedGraph g;
    std::map<NodeId, int> local;
    auto add_local = [&](NodeId n) {
        auto it = local.find(n);
        if (it != local.end()) return it->second;
        int id = static_cast<int>(g.nodes.size());
        local[n] = id;
        g.nodes.push_back(n);
        g.types.push_back(h.node(n).type);
        return id;
    };
    for (NodeId s : p.sources) add_local(s);
    for (EdgeId e : p.solution) add_local(h.edge(e).target);
    for (EdgeId e : p.solution) {
        std::vector<int> srcs;
        for (NodeId s : h.edge(e).sources) {
            auto it = local.find(s);
            if (it != local.end() && h.edge(e).target != s) srcs.push_back(it->second);
        }
        std::sort(srcs.begin(), srcs.end());
        g.edges.emplace_back(std::move(srcs), local.at(h.edge(e).target));
    }
    g.goal_local = local.count(p.goal) ? local.at(p.goal) : -1;
    return g;
}

ProblemMetrics metrics(const Hypergraph& h, const Problem& p) {
    ProblemMetrics m;
    m.steps = std::max<int>(1, static_cast<int>(p.solution.size()));
    // longest-chain layering over the induced nodes (intrinsics ambient)
    std::map<NodeId, int> layer;
    for (NodeId s : p.sources) layer[s] = 0;
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ <= static_cast<int>(p.solution.size()) + 1) {
        changed = false;
        for (EdgeId e : p.solution) {
            int d = 0;
            for (NodeId s : h.edge(e).sources) {
                auto it = layer.find(s);
                if (it != layer.end()) d = std::max(d, it->second);
            }
            NodeId t = h.edge(e).target;
            int nd = d + 1;
            auto it = layer.find(t);
            if (it == layer.end() || nd > it->second) {
                layer[t] = nd;
                changed = true;
            }
        }
    }
    auto git = layer.find(p.goal);
    m.length = git == layer.end() ? 1 : std::max(1, git->second);
    std::map<int, int> width_at;
    for (auto& [n, d] : layer) ++width_at[d];
    m.width = 1;
    for (auto& [d, w] : width_at) m.width = std::max(m.width, w);
    return m;
}

namespace {

constexpr long long kInfCost = (1LL << 60);

/// Canonical solution extraction: least-cost derivation of the goal from the
/// masked assumptions plus intrinsics, cost = derivation tree size (shared
/// lemmas recounted). Costs and shape signatures are invariant under point
/// renaming, so symmetric goals receive mirror-image solutions; exact shape
/// ties are tried in both orientations and the shorter edge list wins.
std::vector<EdgeId> extract_solution(const Hypergraph& h, const RuleConfig& cfg,
                                     const std::vector<char>& in,
                                     const std::vector<NodeId>& intrinsics,
                                     const std::vector<NodeId>& assumption_nodes,
                                     std::size_t mask, NodeId goal) {
    std::size_t n = h.node_count();
    std::vector<long long> cost(n, kInfCost);
    for (NodeId s : intrinsics) cost[s] = 0;
    for (std::size_t i = 0; i < assumption_nodes.size(); ++i)
        if (mask & (std::size_t(1) << i)) cost[assumption_nodes[i]] = 0;

    std::vector<EdgeId> usable;
    for (EdgeId e = 0; e < static_cast<EdgeId>(h.edge_count()); ++e) {
        const Edge& ed = h.edge(e);
        if (!cfg.is_enabled(ed.rule) || !in[ed.target]) continue;
        bool ok = true;
        for (NodeId s : ed.sources)
            if (!in[s] && cost[s] != 0) { ok = false; break; }
        if (ok) usable.push_back(e);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (EdgeId e : usable) {
            const Edge& ed = h.edge(e);
            if (cost[ed.target] == 0) continue;
            long long c = 1;
            for (NodeId s : ed.sources) {
                if (cost[s] >= kInfCost) { c = kInfCost; break; }
                c += cost[s];
                if (c >= kInfCost) { c = kInfCost; break; }
            }
            if (c < cost[ed.target]) {
                cost[ed.target] = c;
                changed = true;
            }
        }
    }
    if (goal < 0 || cost[goal] >= kInfCost) return {};

    // nodes in increasing cost order; signatures need children first
    std::vector<NodeId> order;
    for (NodeId i = 0; i < static_cast<NodeId>(n); ++i)
        if (cost[i] < kInfCost && cost[i] > 0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (cost[a] != cost[b]) return cost[a] < cost[b];
        return h.node(a).prop < h.node(b).prop;
    });
    std::vector<std::string> sig(n);
    std::vector<EdgeId> chosen_fwd(n, -1), chosen_rev(n, -1);
    for (NodeId i = 0; i < static_cast<NodeId>(n); ++i)
        if (cost[i] == 0)
            sig[i] = h.node(i).provenance == Provenance::Assumption ? "A" : "I";
    for (NodeId t : order) {
        std::string best_sig;
        EdgeId best_f = -1, best_r = -1;
        for (EdgeId e : h.in_edges(t)) {
            const Edge& ed = h.edge(e);
            if (!cfg.is_enabled(ed.rule)) continue;
            long long c = 1;
            bool ok = true;
            for (NodeId s : ed.sources) {
                if ((!in[s] && cost[s] != 0) || cost[s] >= kInfCost) { ok = false; break; }
                c += cost[s];
            }
            if (!ok || c != cost[t]) continue;
            std::vector<std::string> child;
            for (NodeId s : ed.sources) child.push_back(sig[s]);
            std::sort(child.begin(), child.end());
            std::string s = ed.rule + "(";
            for (auto& cs : child) s += cs + ",";
            s += ")";
            if (best_f < 0 || s < best_sig) {
                best_sig = s;
                best_f = best_r = e;
            } else if (s == best_sig) {
                if (edge_canonical_less(h, e, best_f)) best_f = e;
                if (edge_canonical_less(h, best_r, e)) best_r = e;
            }
        }
        sig[t] = best_sig.empty() ? "?" : best_sig;
        chosen_fwd[t] = best_f;
        chosen_rev[t] = best_r;
    }

    auto walk = [&](const std::vector<EdgeId>& chosen) -> std::vector<EdgeId> {
        std::vector<EdgeId> sol;
        std::vector<NodeId> stack{goal};
        std::set<NodeId> expanded;
        while (!stack.empty()) {
            NodeId t = stack.back();
            stack.pop_back();
            if (cost[t] == 0 || expanded.count(t)) continue;
            expanded.insert(t);
            if (chosen[t] < 0) return {};
            sol.push_back(chosen[t]);
            for (NodeId s : h.edge(chosen[t]).sources) stack.push_back(s);
        }
        return sol;
    };
    std::vector<EdgeId> sol = walk(chosen_fwd);
    std::vector<EdgeId> alt = walk(chosen_rev);
    if (sol.empty() || (!alt.empty() && alt.size() < sol.size())) sol = std::move(alt);
    return sol;
}

// one problem per (goal, minimal assumption subset), via subset reachability
std::vector<Problem> assumption_subset_problems(const Hypergraph& h,
                                                const std::vector<NodeId>& assumption_nodes,
                                                const RuleConfig& cfg) {
    std::vector<Problem> out;
    std::size_t k = assumption_nodes.size();
    if (k == 0 || k > 10) return out;
    std::vector<NodeId> intrinsics;
    for (std::size_t i = 0; i < h.node_count(); ++i)
        if (h.node(static_cast<NodeId>(i)).provenance == Provenance::Intrinsic)
            intrinsics.push_back(static_cast<NodeId>(i));

    std::size_t nsub = std::size_t(1) << k;
    std::vector<std::vector<char>> closure(nsub);
    for (std::size_t mask = 0; mask < nsub; ++mask) {
        std::vector<NodeId> srcs = intrinsics;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::size_t(1) << i)) srcs.push_back(assumption_nodes[i]);
        closure[mask] = reachable_closure(h, srcs, cfg);
    }

    for (NodeId g = 0; g < static_cast<NodeId>(h.node_count()); ++g) {
        if (h.node(g).provenance != Provenance::Derived) continue;
        for (std::size_t mask = 1; mask < nsub; ++mask) {
            if (!closure[mask][g]) continue;
            bool minimal = true;
            for (std::size_t i = 0; i < k && minimal; ++i)
                if ((mask & (std::size_t(1) << i)) && closure[mask & ~(std::size_t(1) << i)][g])
                    minimal = false;
            if (!minimal) continue;
            std::vector<EdgeId> sol =
                extract_solution(h, cfg, closure[mask], intrinsics, assumption_nodes, mask, g);
            if (sol.empty()) continue;
            std::vector<NodeId> S;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (std::size_t(1) << i)) S.push_back(assumption_nodes[i]);
            Problem p = make_problem(h, S, g, sol);
            if (p.solution.empty()) continue;
            p.metrics = metrics(h, p);
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace

Synthesis synthesize(const Figure& fig, const RuleConfig& cfg, const SynthBudget& budget,
                     const SaturateOptions& sat_opts, double eps) {
    Synthesis syn;
    syn.figure = fig;
    syn.eps = eps;
    syn.cfg = cfg;
    GeomContext ctx{&syn.figure, eps};
    syn.graph = saturate(figure_seed(fig, eps), cfg, ctx, sat_opts);
    Hypergraph& h = syn.graph;

    for (NodeId i = 0; i < static_cast<NodeId>(h.node_count()); ++i) {
        if (h.node(i).provenance == Provenance::Intrinsic) syn.intrinsic_nodes.push_back(i);
        if (h.node(i).provenance == Provenance::Assumption) syn.assumption_nodes.push_back(i);
    }
    // assumption node order must follow the figure's declaration order
    syn.assumption_nodes.clear();
    for (const Prop& a : fig.assumptions) {
        NodeId n = h.find(a);
        if (n >= 0) syn.assumption_nodes.push_back(n);
    }

    std::vector<NodeId> sources = syn.intrinsic_nodes;
    sources.insert(sources.end(), syn.assumption_nodes.begin(), syn.assumption_nodes.end());
    syn.pebbling = pebble(h, sources, cfg);
    syn.closure = assumption_closure(h, syn.assumption_nodes, cfg);
    syn.implicit_goals = extract_implicit_facts(fig, eps);

    std::map<std::pair<NodeId, std::vector<NodeId>>, Problem> dedup;
    auto add_problem = [&](Problem&& p) {
        if (p.goal < 0 || p.solution.empty()) return;
        for (NodeId s : p.sources)
            if (s == p.goal) return;
        auto key = std::make_pair(p.goal, p.sources);
        dedup.emplace(std::move(key), std::move(p));
    };

    // assumption-rooted problems first: their canonical solutions win dedup
    for (Problem& p : assumption_subset_problems(h, syn.assumption_nodes, cfg))
        add_problem(std::move(p));
    for (NodeId g = 0; g < static_cast<NodeId>(h.node_count()); ++g) {
        if (h.node(g).provenance != Provenance::Derived || !syn.pebbling.pebbled[g]) continue;
        for (Problem& p : enumerate_problems(h, syn.pebbling, g, budget, cfg))
            add_problem(std::move(p));
    }
    for (Problem& p : converse_problems(h, syn.pebbling, syn.assumption_nodes, budget, cfg))
        add_problem(std::move(p));

    syn.problems.reserve(dedup.size());
    for (auto& [key, p] : dedup) syn.problems.push_back(std::move(p));
    std::sort(syn.problems.begin(), syn.problems.end(), [&](const Problem& a, const Problem& b) {
        const Prop &ga = h.node(a.goal).prop, &gb = h.node(b.goal).prop;
        if (ga != gb) return ga < gb;
        std::vector<Prop> sa, sb;
        for (NodeId s : a.sources) sa.push_back(h.node(s).prop);
        for (NodeId s : b.sources) sb.push_back(h.node(s).prop);
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        return sa < sb;
    });
    for (Problem& p : syn.problems)
        classify(h, p, syn.closure, static_cast<int>(syn.assumption_nodes.size()), cfg);
    return syn;
}

}  // namespace geo
