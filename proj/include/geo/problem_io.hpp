#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geo/analogy.hpp"
#include "geo/check.hpp"
#include "geo/synth.hpp"

namespace geo {

/// Table-1 style query: inclusive metric ranges plus kind filters.
struct Query {
    std::optional<std::pair<int, int>> width;
    std::optional<std::pair<int, int>> length;
    std::optional<std::pair<int, int>> steps;
    std::set<PropKind> goal_types;
    std::set<PropKind> source_types;
};

struct Stats {
    long long generated = 0;
    long long interesting = 0;
    long long strictly_interesting = 0;
    long long converse = 0;
    double goal_partitions = 0;
    std::array<long long, 4> steps_interesting{};  // 0-2, 3-5, 6-10, >10
    std::array<long long, 4> steps_strict{};
    std::array<long long, 5> givens{};  // 0-25, 26-50, 51-75, 76-99, 100 (%)
};

/// Problem as read back from a problem-set file.
struct ProblemRecord {
    std::string id;
    bool interesting = false, strictly_interesting = false, converse = false;
    int used_assumptions = 0;
    std::vector<Prop> sources;
    Prop goal;
    ProblemMetrics metrics;
    std::vector<ProofStep> steps;
};

struct ProblemSetFile {
    std::string figure_name;
    Symbols symbols;
    std::vector<Prop> assumptions;
    std::vector<ProblemRecord> problems;
    std::vector<std::vector<std::string>> goal_classes;    // problem ids
    std::vector<std::vector<std::string>> coarse_classes;  // problem ids
    Stats stats;
};

int steps_bucket(int steps);                       // 0..3
int givens_bucket(int used, int total);            // 0..4, -1 when total == 0
extern const char* const kStepsBucketLabels[4];
extern const char* const kGivensBucketLabels[5];

Stats compute_stats(const Synthesis& syn, const AnalogyReport& rep);

/// Renders the full problem-set file (problems, analogy sections, stats
/// block, optional textbook-validation section). Byte-stable.
std::string render_problem_set(const Synthesis& syn, const AnalogyReport& rep,
                               const Stats& stats,
                               const std::vector<std::pair<Prop, bool>>* validation);

std::string render_stats_block(const Stats& stats);

std::optional<ProblemSetFile> parse_problem_set(const std::string& text,
                                                std::string* err = nullptr);

bool query_matches(const Query& q, const ProblemRecord& p);

/// Filters a parsed set and renders the result plus both histogram tables.
std::string run_query(const ProblemSetFile& set, const Query& q);

/// Histogram block for an arbitrary record subset.
std::string render_histograms(const std::vector<const ProblemRecord*>& ps, int assumption_count);

}  // namespace geo
