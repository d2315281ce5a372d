#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "geo/figure.hpp"
#include "geo/hypergraph.hpp"
#include "geo/pebble.hpp"
#include "geo/saturate.hpp"

namespace geo {

struct ProblemMetrics {
    int width = 1;
    int length = 1;
    int steps = 1;
};

/// S |- g with a replayable solution (edge list in dependency order;
/// intrinsic premises are ambient and never appear among sources).
struct Problem {
    std::vector<NodeId> sources;  // sorted, non-intrinsic
    NodeId goal = -1;
    std::vector<EdgeId> solution;
    ProblemMetrics metrics;
    bool interesting = false;
    bool strictly_interesting = false;
    bool converse = false;
    std::vector<int> used_assumptions;  // indices into the figure's assumption list
    int goal_class = -1;
    int coarse_class = -1;
};

struct SynthBudget {
    int max_per_goal = 64;
    int max_depth = 12;
    int converse_depth = 4;
};

/// Definition-closure of the assumptions (their theory): membership plus,
/// per node, which assumptions it expands from.
struct AssumptionClosure {
    std::vector<char> member;
    std::vector<std::vector<int>> used;
};

AssumptionClosure assumption_closure(const Hypergraph& h,
                                     const std::vector<NodeId>& assumption_nodes,
                                     const RuleConfig& cfg);

/// All problems for one pebbled goal per the forward-edge composition, the
/// trivial decomposition included, deduplicated by source set.
std::vector<Problem> enumerate_problems(const Hypergraph& h, const PebbleResult& pr, NodeId goal,
                                        const SynthBudget& budget, const RuleConfig& cfg);

/// True iff no proper subset of S still derives g (drop-one reachability;
/// intrinsic nodes are always available). Throws if S does not derive g.
bool is_minimal(const Hypergraph& h, const std::vector<NodeId>& S, NodeId g,
                const RuleConfig& cfg);

/// Fills the interesting / strictly_interesting flags per Definition 7.
void classify(const Hypergraph& h, Problem& p, const AssumptionClosure& closure,
              int assumption_count, const RuleConfig& cfg);

/// Problems whose goal is an assumption, rooted at back-edges.
std::vector<Problem> converse_problems(const Hypergraph& h, const PebbleResult& pr,
                                       const std::vector<NodeId>& assumption_nodes,
                                       const SynthBudget& budget, const RuleConfig& cfg);

/// Induced problem hypergraph (intrinsic support excluded), locally indexed.
struct InducedGraph {
    std::vector<NodeId> nodes;  // graph node per local index; sources first
    std::vector<NodeType> types;
    std::vector<std::pair<std::vector<int>, int>> edges;
    int goal_local = -1;
};

InducedGraph induced(const Hypergraph& h, const Problem& p);
ProblemMetrics metrics(const Hypergraph& h, const Problem& p);

/// Full synthesis product for one figure.
struct Synthesis {
    Figure figure;
    double eps = kDefaultEps;
    RuleConfig cfg;
    Hypergraph graph;
    PebbleResult pebbling;
    std::vector<NodeId> intrinsic_nodes;
    std::vector<NodeId> assumption_nodes;
    AssumptionClosure closure;
    std::vector<Problem> problems;  // canonical order: (goal, sources)
    std::vector<Prop> implicit_goals;
};

Synthesis synthesize(const Figure& fig, const RuleConfig& cfg, const SynthBudget& budget,
                     const SaturateOptions& sat_opts, double eps = kDefaultEps);

}  // namespace geo
