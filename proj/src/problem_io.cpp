#include "geo/problem_io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace geo {

const char* const kStepsBucketLabels[4] = {"0-2", "3-5", "6-10", ">10"};
const char* const kGivensBucketLabels[5] = {"0-25%", "26-50%", "51-75%", "76-99%", "100%"};

int steps_bucket(int steps) {
    if (steps <= 2) return 0;
    if (steps <= 5) return 1;
    if (steps <= 10) return 2;
    return 3;
}

int givens_bucket(int used, int total) {
    if (total <= 0) return -1;
    double pct = 100.0 * used / total;
    if (pct <= 25.0) return 0;
    if (pct <= 50.0) return 1;
    if (pct <= 75.0) return 2;
    if (pct < 100.0) return 3;
    return 4;
}

Stats compute_stats(const Synthesis& syn, const AnalogyReport& rep) {
    Stats st;
    int total_assumptions = static_cast<int>(syn.assumption_nodes.size());
    for (const Problem& p : syn.problems) {
        if (p.converse) {
            ++st.converse;
            continue;
        }
        ++st.generated;
        if (p.interesting) {
            ++st.interesting;
            ++st.steps_interesting[steps_bucket(p.metrics.steps)];
            int gb = givens_bucket(static_cast<int>(p.used_assumptions.size()), total_assumptions);
            if (gb >= 0) ++st.givens[gb];
        }
        if (p.strictly_interesting) {
            ++st.strictly_interesting;
            ++st.steps_strict[steps_bucket(p.metrics.steps)];
        }
    }
    st.goal_partitions = static_cast<double>(rep.goal_classes.size());
    return st;
}

std::string render_stats_block(const Stats& st) {
    std::ostringstream os;
    char buf[64];
    os << "stats\n";
    os << "Generated Problems | " << st.generated << "\n";
    os << "Interesting Problems | " << st.interesting << "\n";
    os << "Strictly Interesting Problems | " << st.strictly_interesting << "\n";
    os << "Converse Problems | " << st.converse << "\n";
    os << "Time (secs / figure) | -\n";
    snprintf(buf, sizeof buf, "%.2f", st.goal_partitions);
    os << "Ave. Goal Analogous Partitions | " << buf << "\n";
    os << "steps-histogram\n";
    for (int i = 0; i < 4; ++i)
        os << kStepsBucketLabels[i] << " | " << st.steps_interesting[i] << " | "
           << st.steps_strict[i] << "\n";
    os << "givens-histogram\n";
    for (int i = 0; i < 5; ++i) os << kGivensBucketLabels[i] << " | " << st.givens[i] << "\n";
    return os.str();
}

namespace {

std::string problem_id(std::size_t idx) {
    char buf[16];
    snprintf(buf, sizeof buf, "p%04zu", idx + 1);
    return buf;
}

std::string render_step(const Hypergraph& h, EdgeId e, const Symbols& sym) {
    const Edge& ed = h.edge(e);
    std::string line = ed.rule + ":";
    bool first = true;
    for (NodeId s : ed.sources) {
        line += first ? " " : ", ";
        line += prop_to_string(h.node(s).prop, sym);
        first = false;
    }
    line += " => " + prop_to_string(h.node(ed.target).prop, sym);
    return line;
}

}  // namespace

std::string render_problem_set(const Synthesis& syn, const AnalogyReport& rep,
                               const Stats& stats,
                               const std::vector<std::pair<Prop, bool>>* validation) {
    const Hypergraph& h = syn.graph;
    const Symbols& sym = syn.figure.symbols;
    std::ostringstream os;
    os << "geoproof-problem-set v1\n";
    os << "figure " << syn.figure.name << "\n";
    os << "points";
    for (const auto& n : sym.names()) os << " " << n;
    os << "\n";
    for (NodeId a : syn.assumption_nodes)
        os << "assumption " << prop_to_string(h.node(a).prop, sym) << "\n";
    os << "\n";
    for (std::size_t i = 0; i < syn.problems.size(); ++i) {
        const Problem& p = syn.problems[i];
        os << "problem " << problem_id(i) << "\n";
        os << "flags";
        if (p.interesting) os << " interesting";
        if (p.strictly_interesting) os << " strictly-interesting";
        if (p.converse) os << " converse";
        if (!p.interesting && !p.strictly_interesting && !p.converse) os << " plain";
        os << "\n";
        os << "used-assumptions " << p.used_assumptions.size() << "\n";
        for (NodeId s : p.sources) os << "source " << prop_to_string(h.node(s).prop, sym) << "\n";
        os << "goal " << prop_to_string(h.node(p.goal).prop, sym) << "\n";
        os << "metrics " << p.metrics.width << " " << p.metrics.length << " " << p.metrics.steps
           << "\n";
        for (EdgeId e : p.solution) os << "step " << render_step(h, e, sym) << "\n";
        os << "end\n";
    }
    os << "\n";
    os << "goal-classes\n";
    for (std::size_t c = 0; c < rep.goal_classes.size(); ++c) {
        os << "class g" << c + 1 << ":";
        for (int idx : rep.goal_classes[c]) os << " " << problem_id(idx);
        os << "\n";
    }
    os << "coarse-classes\n";
    for (std::size_t c = 0; c < rep.coarse_classes.size(); ++c) {
        os << "class c" << c + 1 << ":";
        for (int idx : rep.coarse_classes[c]) os << " " << problem_id(idx);
        os << "\n";
    }
    if (!rep.oversize.empty()) {
        os << "oversize:";
        for (int idx : rep.oversize) os << " " << problem_id(idx);
        os << "\n";
    }
    os << "\n" << render_stats_block(stats);
    if (validation) {
        os << "validation\n";
        for (const auto& [goal, ok] : *validation)
            os << "goal " << prop_to_string(goal, sym) << " | " << (ok ? "PASS" : "FAIL") << "\n";
    }
    return os.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

std::optional<ProofStep> parse_step_line(const std::string& body, const Symbols& sym,
                                         std::string* err) {
    auto colon = body.find(':');
    if (colon == std::string::npos) {
        if (err) *err = "step line missing rule separator ':'";
        return std::nullopt;
    }
    ProofStep step;
    step.rule = body.substr(0, colon);
    auto arrow = body.find("=>", colon);
    if (arrow == std::string::npos) {
        if (err) *err = "step line missing '=>'";
        return std::nullopt;
    }
    std::string prem_part = body.substr(colon + 1, arrow - colon - 1);
    std::string concl_part = body.substr(arrow + 2);
    std::size_t pos = 0;
    while (pos < prem_part.size()) {
        auto comma = prem_part.find(',', pos);
        std::string piece = comma == std::string::npos ? prem_part.substr(pos)
                                                       : prem_part.substr(pos, comma - pos);
        auto toks = split_ws(piece);
        if (!toks.empty()) {
            auto p = parse_prop(toks, sym, err);
            if (!p) return std::nullopt;
            step.premises.push_back(*p);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    auto ctoks = split_ws(concl_part);
    auto c = parse_prop(ctoks, sym, err);
    if (!c) return std::nullopt;
    step.conclusion = *c;
    return step;
}

}  // namespace

std::optional<ProblemSetFile> parse_problem_set(const std::string& text, std::string* err) {
    auto fail = [&](const std::string& m) -> std::optional<ProblemSetFile> {
        if (err) *err = m;
        return std::nullopt;
    };
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("geoproof-problem-set", 0) != 0)
        return fail("not a problem-set file");
    ProblemSetFile out;
    std::vector<std::string> raw_lines;
    while (std::getline(is, line)) raw_lines.push_back(line);

    // pass 1: points line builds the symbol table
    for (const auto& l : raw_lines) {
        auto toks = split_ws(l);
        if (!toks.empty() && toks[0] == "points") {
            out.symbols = Symbols::make_ranked({toks.begin() + 1, toks.end()});
            break;
        }
    }

    ProblemRecord cur;
    bool in_problem = false;
    enum class Sect { None, GoalClasses, CoarseClasses, Stats, Validation } sect = Sect::None;
    for (const auto& l : raw_lines) {
        auto toks = split_ws(l);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "figure") {
            if (toks.size() >= 2) out.figure_name = toks[1];
        } else if (head == "points") {
            // handled
        } else if (head == "assumption") {
            auto p = parse_prop({toks.begin() + 1, toks.end()}, out.symbols, err);
            if (!p) return std::nullopt;
            out.assumptions.push_back(*p);
        } else if (head == "problem") {
            if (toks.size() != 2) return fail("bad problem header");
            cur = ProblemRecord{};
            cur.id = toks[1];
            in_problem = true;
        } else if (head == "flags" && in_problem) {
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (toks[i] == "interesting") cur.interesting = true;
                if (toks[i] == "strictly-interesting") cur.strictly_interesting = true;
                if (toks[i] == "converse") cur.converse = true;
            }
        } else if (head == "used-assumptions" && in_problem) {
            cur.used_assumptions = std::atoi(toks[1].c_str());
        } else if (head == "source" && in_problem) {
            auto p = parse_prop({toks.begin() + 1, toks.end()}, out.symbols, err);
            if (!p) return std::nullopt;
            cur.sources.push_back(*p);
        } else if (head == "goal" && in_problem) {
            auto p = parse_prop({toks.begin() + 1, toks.end()}, out.symbols, err);
            if (!p) return std::nullopt;
            cur.goal = *p;
        } else if (head == "metrics" && in_problem) {
            if (toks.size() != 4) return fail("bad metrics line");
            cur.metrics.width = std::atoi(toks[1].c_str());
            cur.metrics.length = std::atoi(toks[2].c_str());
            cur.metrics.steps = std::atoi(toks[3].c_str());
        } else if (head == "step" && in_problem) {
            auto body = l.substr(l.find("step") + 5);
            auto st = parse_step_line(body, out.symbols, err);
            if (!st) return std::nullopt;
            cur.steps.push_back(*st);
        } else if (head == "end" && in_problem) {
            out.problems.push_back(cur);
            in_problem = false;
        } else if (head == "goal-classes") {
            sect = Sect::GoalClasses;
        } else if (head == "coarse-classes") {
            sect = Sect::CoarseClasses;
        } else if (head == "stats") {
            sect = Sect::Stats;
        } else if (head == "validation") {
            sect = Sect::Validation;
        } else if (head == "class") {
            std::vector<std::string> ids(toks.begin() + 2, toks.end());
            if (sect == Sect::GoalClasses) out.goal_classes.push_back(ids);
            if (sect == Sect::CoarseClasses) out.coarse_classes.push_back(ids);
        }
    }
    return out;
}

bool query_matches(const Query& q, const ProblemRecord& p) {
    auto in_range = [](const std::optional<std::pair<int, int>>& r, int v) {
        return !r || (v >= r->first && v <= r->second);
    };
    if (!in_range(q.width, p.metrics.width)) return false;
    if (!in_range(q.length, p.metrics.length)) return false;
    if (!in_range(q.steps, p.metrics.steps)) return false;
    if (!q.goal_types.empty() && !q.goal_types.count(p.goal.kind)) return false;
    if (!q.source_types.empty()) {
        bool any = false;
        for (const Prop& s : p.sources)
            if (q.source_types.count(s.kind)) any = true;
        if (!any) return false;
    }
    return true;
}

std::string render_histograms(const std::vector<const ProblemRecord*>& ps, int assumption_count) {
    std::array<long long, 4> si{}, ss{};
    std::array<long long, 5> gv{};
    for (const ProblemRecord* p : ps) {
        if (p->interesting) {
            ++si[steps_bucket(p->metrics.steps)];
            int gb = givens_bucket(p->used_assumptions, assumption_count);
            if (gb >= 0) ++gv[gb];
        }
        if (p->strictly_interesting) ++ss[steps_bucket(p->metrics.steps)];
    }
    std::ostringstream os;
    os << "steps-histogram\n";
    for (int i = 0; i < 4; ++i)
        os << kStepsBucketLabels[i] << " | " << si[i] << " | " << ss[i] << "\n";
    os << "givens-histogram\n";
    for (int i = 0; i < 5; ++i) os << kGivensBucketLabels[i] << " | " << gv[i] << "\n";
    return os.str();
}

std::string run_query(const ProblemSetFile& set, const Query& q) {
    std::ostringstream os;
    std::vector<const ProblemRecord*> hits;
    for (const ProblemRecord& p : set.problems)
        if (query_matches(q, p)) hits.push_back(&p);
    os << "matched " << hits.size() << " of " << set.problems.size() << "\n";
    for (const ProblemRecord* p : hits) {
        os << p->id << " | goal " << prop_kind_name(p->goal.kind) << " | metrics "
           << p->metrics.width << " " << p->metrics.length << " " << p->metrics.steps << " |";
        if (p->interesting) os << " interesting";
        if (p->strictly_interesting) os << " strictly-interesting";
        if (p->converse) os << " converse";
        if (!p->interesting && !p->strictly_interesting && !p->converse) os << " plain";
        os << "\n";
    }
    os << render_histograms(hits, static_cast<int>(set.assumptions.size()));
    return os.str();
}

}  // namespace geo
