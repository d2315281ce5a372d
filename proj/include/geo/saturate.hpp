#pragma once

#include <vector>

#include "geo/catalog.hpp"
#include "geo/figure.hpp"
#include "geo/hypergraph.hpp"

namespace geo {

struct GeomContext {
    const Figure* figure = nullptr;
    double eps = kDefaultEps;
};

struct SaturateOptions {
    bool parallel = false;       // OpenMP instantiation
    bool shuffle = false;        // randomize application order (testing hook)
    unsigned shuffle_seed = 0;
};

/// Least-fixpoint closure of the seed facts under the enabled rules.
/// Deterministic: identical inputs give an identical graph (node order
/// included) regardless of the parallel flag; with shuffle the node/edge
/// sets are identical but indices may differ.
Hypergraph saturate(const std::vector<std::pair<Prop, Provenance>>& seed, const RuleConfig& cfg,
                    const GeomContext& ctx, const SaturateOptions& opt = {});

/// Structural identity key: node set + edge set rendered canonically,
/// independent of node indices (for order-independence checks).
std::string graph_signature(const Hypergraph& h, const Symbols& sym);

/// Seed for a figure: intrinsic facts plus declared assumptions.
std::vector<std::pair<Prop, Provenance>> figure_seed(const Figure& f, double eps);

}  // namespace geo
