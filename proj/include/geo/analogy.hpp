#pragma once

#include <vector>

#include "geo/synth.hpp"

namespace geo {

/// Type-preserving isomorphism between induced problem graphs: a bijection
/// that keeps the algebraic/geometric node tag, maps edges to edges in both
/// directions, and preserves each edge's per-type source counts.
bool coarsely_analogous(const InducedGraph& a, const InducedGraph& b, int node_cap = 64);

/// Fast necessary conditions only (used before the search and as the
/// fallback above the node cap).
bool coarse_necessary(const InducedGraph& a, const InducedGraph& b);

struct AnalogyReport {
    std::vector<std::vector<int>> goal_classes;    // problem indices per class
    std::vector<std::vector<int>> coarse_classes;  // problem indices per class
    std::vector<int> oversize;                     // problems above the search cap
};

/// Partitions the given problems (by index into syn.problems, or any subset)
/// by goal type and by coarse analogy.
AnalogyReport partition(const Synthesis& syn, const std::vector<int>& problem_indices,
                        int node_cap = 64);

}  // namespace geo
