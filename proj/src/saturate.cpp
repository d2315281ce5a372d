#include "geo/saturate.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geo {

namespace {

/// FactView over the live hypergraph.
class GraphFacts : public FactView {
  public:
    explicit GraphFacts(const Hypergraph& g) : g_(g) {}

    void sync() {
        while (synced_ < g_.node_count()) {
            const Prop& p = g_.node(static_cast<NodeId>(synced_)).prop;
            by_kind_[static_cast<int>(p.kind)].emplace_back(p, static_cast<int>(synced_));
            ++synced_;
        }
    }

    int lookup(const Prop& p) const override { return g_.find(p); }
    const std::vector<std::pair<Prop, int>>& by_kind(PropKind k) const override {
        return by_kind_[static_cast<int>(k)];
    }

  private:
    const Hypergraph& g_;
    std::size_t synced_ = 0;
    std::array<std::vector<std::pair<Prop, int>>, kPropKindCount> by_kind_;
};

struct Candidate {
    Instance inst;
    int variant_index;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    const RuleVariant *va = a.inst.variant, *vb = b.inst.variant;
    if (va->id != vb->id) return va->id < vb->id;
    if (a.inst.premise_ids != b.inst.premise_ids) return a.inst.premise_ids < b.inst.premise_ids;
    if (a.inst.conclusion != b.inst.conclusion) return a.inst.conclusion < b.inst.conclusion;
    return a.variant_index < b.variant_index;
}

}  // namespace

std::vector<std::pair<Prop, Provenance>> figure_seed(const Figure& f, double eps) {
    std::vector<std::pair<Prop, Provenance>> seed;
    for (const Prop& p : intrinsic_facts(f, eps).facts) seed.emplace_back(p, Provenance::Intrinsic);
    for (const Prop& p : f.assumptions) seed.emplace_back(p, Provenance::Assumption);
    return seed;
}

Hypergraph saturate(const std::vector<std::pair<Prop, Provenance>>& seed, const RuleConfig& cfg,
                    const GeomContext& ctx, const SaturateOptions& opt) {
    Hypergraph g;
    for (const auto& [p, prov] : seed) {
        Prop c = canonicalize(p);
        if (prop_degenerate(c) || prop_reflexively_true(c)) continue;
        g.add_node(c, prov);
    }

    std::vector<const RuleVariant*> active;
    for (const RuleVariant& v : Catalog::standard().variants())
        if (cfg.is_enabled(v.id)) active.push_back(&v);

    std::mt19937 rng(opt.shuffle_seed);
    MatchEnv env;
    env.figure = ctx.figure;
    env.eps = ctx.eps;
    env.cap_num = cfg.cap_num;
    env.cap_den = cfg.cap_den;

    GraphFacts facts(g);
    facts.sync();

    std::vector<char> delta(g.node_count(), 1);
    bool first_round = true;

    while (true) {
        if (opt.shuffle) {
            std::shuffle(active.begin(), active.end(), rng);
        }

        std::vector<Candidate> pool;
#ifdef _OPENMP
        if (opt.parallel) {
            int nv = static_cast<int>(active.size());
            std::vector<std::vector<Candidate>> buckets(nv);
            std::vector<int> capped(nv, 0);
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < nv; ++i) {
                capped[i] = for_each_instance(
                    *active[i], facts, env, first_round ? nullptr : &delta,
                    [&](Instance&& inst) { buckets[i].push_back({std::move(inst), i}); });
            }
            for (int i = 0; i < nv; ++i) {
                g.warnings_capped += static_cast<std::uint32_t>(capped[i]);
                for (auto& c : buckets[i]) pool.push_back(std::move(c));
            }
        } else
#endif
        {
            for (int i = 0; i < static_cast<int>(active.size()); ++i) {
                int capped = for_each_instance(
                    *active[i], facts, env, first_round ? nullptr : &delta,
                    [&](Instance&& inst) { pool.push_back({std::move(inst), i}); });
                g.warnings_capped += static_cast<std::uint32_t>(capped);
            }
        }
        first_round = false;

        std::sort(pool.begin(), pool.end(), candidate_less);
        if (opt.shuffle) std::shuffle(pool.begin(), pool.end(), rng);

        std::vector<NodeId> touched;
        bool changed = false;
        for (const Candidate& cand : pool) {
            const Instance& inst = cand.inst;
            const RuleVariant& v = *inst.variant;

            bool algebraic = v.family == RuleFamily::Algebraic;
            if (algebraic) {
                int depth = 0;
                for (int pid : inst.premise_ids)
                    depth = std::max(depth, g.node(pid).alg_depth);
                if (depth + 1 > cfg.cap_chain) {
                    ++g.warnings_capped;
                    continue;
                }
            }
            NodeId tgt = g.find(inst.conclusion);
            bool is_new_node = tgt < 0;
            if (tgt >= 0) {
                bool src_is_tgt = false;
                for (int pid : inst.premise_ids)
                    if (pid == tgt) src_is_tgt = true;
                if (src_is_tgt) continue;
            }
            if (is_new_node) tgt = g.add_node(inst.conclusion, Provenance::Derived);
            std::vector<NodeId> srcs(inst.premise_ids.begin(), inst.premise_ids.end());
            EdgeId e = g.add_edge(std::move(srcs), tgt, v.id, v.family);
            if (e < 0) {
                if (is_new_node) changed = true, touched.push_back(tgt);
                continue;
            }
            changed = true;
            int depth_via = 0;
            if (v.family == RuleFamily::Algebraic) {
                for (int pid : inst.premise_ids)
                    depth_via = std::max(depth_via, g.node(pid).alg_depth);
                depth_via += 1;
            }
            if (is_new_node) {
                g.node(tgt).alg_depth = depth_via;
                touched.push_back(tgt);
            } else if (depth_via < g.node(tgt).alg_depth) {
                g.node(tgt).alg_depth = depth_via;
                touched.push_back(tgt);
            }
        }

        // propagate alg-depth decreases through existing algebraic edges
        std::vector<NodeId> work = touched;
        while (!work.empty()) {
            NodeId n = work.back();
            work.pop_back();
            for (EdgeId e : g.out_edges(n)) {
                const Edge& ed = g.edge(e);
                if (ed.family != RuleFamily::Algebraic) continue;
                int d = 0;
                for (NodeId s : ed.sources) d = std::max(d, g.node(s).alg_depth);
                ++d;
                if (d < g.node(ed.target).alg_depth) {
                    g.node(ed.target).alg_depth = d;
                    touched.push_back(ed.target);
                    work.push_back(ed.target);
                }
            }
        }

        if (!changed) break;
        facts.sync();
        std::fill(delta.begin(), delta.end(), 0);
        delta.resize(g.node_count(), 0);
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (NodeId n : touched) delta[n] = 1;
    }

    g.assign_node_types();
    return g;
}

std::string graph_signature(const Hypergraph& h, const Symbols& sym) {
    std::vector<std::string> nodes;
    for (const Node& n : h.nodes()) nodes.push_back(prop_to_string(n.prop, sym));
    std::sort(nodes.begin(), nodes.end());
    std::vector<std::string> edges;
    for (const Edge& e : h.edges()) {
        std::vector<std::string> srcs;
        for (NodeId s : e.sources) srcs.push_back(prop_to_string(h.node(s).prop, sym));
        std::sort(srcs.begin(), srcs.end());
        std::string line = e.rule + ":";
        for (auto& s : srcs) line += " [" + s + "]";
        line += " => " + prop_to_string(h.node(e.target).prop, sym);
        edges.push_back(line);
    }
    std::sort(edges.begin(), edges.end());
    std::ostringstream os;
    for (auto& n : nodes) os << "n " << n << "\n";
    for (auto& e : edges) os << "e " << e << "\n";
    return os.str();
}

}  // namespace geo
