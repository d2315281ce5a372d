#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "geo/analogy.hpp"
#include "geo/check.hpp"
#include "geo/problem_io.hpp"
#include "geo/synth.hpp"

using namespace geo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct InputError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError{"cannot open " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError{"cannot write " + path};
    out << content;
}

Figure load_figure(const std::string& path) {
    FigureError err;
    auto fig = parse_figure(read_file(path), &err);
    if (!fig)
        throw InputError{path + ":" + std::to_string(err.line) + ": " + err.message};
    return *fig;
}

RuleConfig load_rules(const std::string& path) {
    if (path.empty()) return RuleConfig{};
    std::string err;
    auto cfg = RuleConfig::parse(read_file(path), &err);
    if (!cfg) throw InputError{path + ": " + err};
    return *cfg;
}

ProblemSetFile load_problem_set(const std::string& path) {
    std::string err;
    auto set = parse_problem_set(read_file(path), &err);
    if (!set) throw InputError{path + ": " + err};
    return *set;
}

std::optional<std::pair<int, int>> parse_range(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto colon = s.find(':');
    int a, b;
    if (colon == std::string::npos) {
        a = b = std::atoi(s.c_str());
    } else {
        a = std::atoi(s.substr(0, colon).c_str());
        b = std::atoi(s.substr(colon + 1).c_str());
    }
    if (a <= 0 || b <= 0 || a > b) throw InputError{"bad range '" + s + "'"};
    return std::make_pair(a, b);
}

std::set<PropKind> parse_kinds(const std::string& s) {
    std::set<PropKind> out;
    std::size_t pos = 0;
    while (pos <= s.size() && !s.empty()) {
        auto comma = s.find(',', pos);
        std::string piece = comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
        if (!piece.empty()) {
            auto k = prop_kind_from_name(piece);
            if (!k) throw InputError{"unknown proposition kind '" + piece + "'"};
            out.insert(*k);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

Prop parse_prop_string(const std::string& text, const Symbols& sym) {
    std::istringstream is(text);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    std::string err;
    auto p = parse_prop(toks, sym, &err);
    if (!p) throw InputError{"bad proposition '" + text + "': " + err};
    return *p;
}

std::vector<ProofStep> load_script(const std::string& path, const Symbols& sym) {
    std::vector<ProofStep> steps;
    std::istringstream is(read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto h = line.find_first_not_of(" \t");
        if (h == std::string::npos || line[h] == '#') continue;
        auto colon = line.find(':');
        auto arrow = line.find("=>");
        if (colon == std::string::npos || arrow == std::string::npos)
            throw InputError{path + ":" + std::to_string(lineno) +
                             ": expected '<rule>: <premises> => <conclusion>'"};
        ProofStep step;
        step.rule = line.substr(h, colon - h);
        std::string prem = line.substr(colon + 1, arrow - colon - 1);
        std::size_t pos = 0;
        while (pos < prem.size()) {
            auto comma = prem.find(',', pos);
            std::string piece =
                comma == std::string::npos ? prem.substr(pos) : prem.substr(pos, comma - pos);
            bool blank = piece.find_first_not_of(" \t") == std::string::npos;
            if (!blank) step.premises.push_back(parse_prop_string(piece, sym));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        step.conclusion = parse_prop_string(line.substr(arrow + 2), sym);
        steps.push_back(std::move(step));
    }
    return steps;
}

int cmd_synthesize(const std::string& fig_path, const std::string& rules_path, double eps,
                   const std::string& out_path, const std::string& stats_path,
                   const std::string& dump_path, bool serial) {
    Figure fig = load_figure(fig_path);
    RuleConfig cfg = load_rules(rules_path);
    SaturateOptions sat;
    sat.parallel = !serial;
    auto t0 = std::chrono::steady_clock::now();
    std::cerr << "[synthesize] figure " << fig.name << ": " << fig.coords.size() << " points, "
              << fig.segments.size() << " segments, " << fig.assumptions.size()
              << " assumptions\n";
    Synthesis syn = synthesize(fig, cfg, SynthBudget{}, sat, eps);
    std::cerr << "[synthesize] hypergraph: " << syn.graph.node_count() << " nodes, "
              << syn.graph.edge_count() << " edges";
    if (syn.graph.warnings_capped)
        std::cerr << " (" << syn.graph.warnings_capped << " instances capped)";
    std::cerr << "\n";

    std::vector<int> interesting_idx;
    for (std::size_t i = 0; i < syn.problems.size(); ++i)
        if (syn.problems[i].interesting) interesting_idx.push_back(static_cast<int>(i));
    AnalogyReport rep = partition(syn, interesting_idx);
    for (std::size_t c = 0; c < rep.goal_classes.size(); ++c)
        for (int idx : rep.goal_classes[c]) syn.problems[idx].goal_class = static_cast<int>(c);
    for (std::size_t c = 0; c < rep.coarse_classes.size(); ++c)
        for (int idx : rep.coarse_classes[c]) syn.problems[idx].coarse_class = static_cast<int>(c);

    Stats stats = compute_stats(syn, rep);

    std::vector<std::pair<Prop, bool>> validation;
    for (const Prop& goal : fig.goals) {
        bool ok = false;
        NodeId g = syn.graph.find(goal);
        if (g >= 0)
            for (const Problem& p : syn.problems)
                if (p.goal == g && !p.converse && !p.sources.empty() && p.interesting) {
                    ok = true;
                    break;
                }
        validation.emplace_back(goal, ok);
    }

    std::string text =
        render_problem_set(syn, rep, stats, fig.goals.empty() ? nullptr : &validation);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    if (!stats_path.empty()) write_file(stats_path, render_stats_block(stats));
    if (!dump_path.empty()) write_file(dump_path, syn.graph.dump(fig.symbols));

    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cerr << "[synthesize] problems: " << stats.generated << " generated, "
              << stats.interesting << " interesting, " << stats.strictly_interesting
              << " strictly interesting, " << stats.converse << " converse\n";
    char buf[64];
    snprintf(buf, sizeof buf, "%.2f", secs);
    std::cerr << "[synthesize] time (secs / figure): " << buf << "\n";
    for (const auto& [goal, ok] : validation)
        std::cerr << "[validate] goal " << prop_to_string(goal, fig.symbols) << ": "
                  << (ok ? "PASS" : "FAIL") << "\n";
    return kExitOk;
}

int cmd_query(const std::string& set_path, const Query& q, const std::string& out_path) {
    ProblemSetFile set = load_problem_set(set_path);
    std::string text = run_query(set, q);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return kExitOk;
}

int cmd_hint(const std::string& set_path, const std::string& problem_id,
             const std::vector<std::string>& given) {
    ProblemSetFile set = load_problem_set(set_path);
    const ProblemRecord* rec = nullptr;
    for (const auto& p : set.problems)
        if (p.id == problem_id) rec = &p;
    if (!rec) throw InputError{"no problem '" + problem_id + "' in " + set_path};

    std::set<Prop> have(rec->sources.begin(), rec->sources.end());
    for (const auto& g : given) {
        Prop p = parse_prop_string(g, set.symbols);
        bool known = have.count(p) != 0;
        for (const auto& st : rec->steps) {
            if (st.conclusion == p) known = true;
            for (const auto& pr : st.premises)
                if (pr == p) known = true;
        }
        if (!known) throw InputError{"established fact not part of this problem: " + g};
        have.insert(p);
    }
    if (have.count(rec->goal)) {
        std::cout << "complete\n";
        return kExitOk;
    }
    for (const auto& st : rec->steps) {
        if (have.count(st.conclusion)) continue;
        bool ready = true;
        for (const auto& pr : st.premises) {
            // existence and incidence facts are read off the figure
            if (pr.kind == PropKind::TriangleExists || pr.kind == PropKind::AngleExists ||
                pr.kind == PropKind::SegmentExists || pr.kind == PropKind::Between ||
                pr.kind == PropKind::Collinear)
                continue;
            if (!have.count(pr)) {
                ready = false;
                break;
            }
        }
        if (!ready) continue;
        std::cout << "next " << st.rule << ":";
        bool first = true;
        for (const auto& pr : st.premises) {
            std::cout << (first ? " " : ", ") << prop_to_string(pr, set.symbols);
            first = false;
        }
        std::cout << " => " << prop_to_string(st.conclusion, set.symbols) << "\n";
        return kExitOk;
    }
    std::cout << "complete\n";
    return kExitOk;
}

int cmd_grade(const std::string& fig_path, const std::string& script_path,
              const std::string& goal_text, const std::string& rules_path, double eps) {
    Figure fig = load_figure(fig_path);
    std::vector<ProofStep> script = load_script(script_path, fig.symbols);
    Prop goal;
    if (!goal_text.empty()) {
        goal = parse_prop_string(goal_text, fig.symbols);
    } else if (!fig.goals.empty()) {
        goal = fig.goals.front();
    } else {
        throw InputError{"no goal: give --goal or a goal line in the figure file"};
    }
    for (const auto& st : script)
        if (!Catalog::standard().has_rule(st.rule))
            throw InputError{"unknown rule id '" + st.rule + "'"};

    RuleConfig cfg = load_rules(rules_path);
    Synthesis syn = synthesize(fig, cfg, SynthBudget{}, SaturateOptions{}, eps);
    GradeReport rep = grade(fig, script, goal, &syn, eps);
    for (const auto& sr : rep.steps)
        std::cout << "step " << sr.index + 1 << ": "
                  << (sr.verdict == StepVerdict::Ok ? "ok" : sr.detail) << "\n";
    std::cout << "verdict: " << (rep.correct ? "correct" : "incorrect") << "\n";
    if (!rep.correct && !rep.reason.empty()) std::cout << "reason: " << rep.reason << "\n";
    if (rep.correct && rep.shorter_solution_steps >= 0)
        std::cout << "suggestion: a more succinct solution with " << rep.shorter_solution_steps
                  << " steps exists\n";
    return kExitOk;
}

int cmd_classify(const std::string& fig_path, const std::vector<std::string>& shape, double eps) {
    Figure fig = load_figure(fig_path);
    auto print_shape = [&](const std::vector<PointId>& pts) {
        auto cls = classify_strongest(fig, pts, eps);
        for (PointId p : pts) std::cout << fig.symbols.name(p) << " ";
        std::cout << "-> " << (cls ? shape_class_name(*cls) : "not a shape of this figure")
                  << "\n";
    };
    if (!shape.empty()) {
        std::vector<PointId> pts;
        for (const auto& name : shape) {
            if (!fig.symbols.contains(name)) throw InputError{"unknown point '" + name + "'"};
            pts.push_back(fig.symbols.id(name));
        }
        auto cls = classify_strongest(fig, pts, eps);
        if (!cls) {
            std::cout << "not a declared triangle or quadrilateral\n";
            return kExitInput;
        }
        print_shape(pts);
        return kExitOk;
    }
    IntrinsicFacts in = intrinsic_facts(fig, eps);
    for (const auto& t : in.triangles) print_shape({t[0], t[1], t[2]});
    return kExitOk;
}

int cmd_stats(const std::string& set_path) {
    ProblemSetFile set = load_problem_set(set_path);
    Stats st;
    for (const auto& p : set.problems) {
        if (p.converse) {
            ++st.converse;
            continue;
        }
        ++st.generated;
        if (p.interesting) {
            ++st.interesting;
            ++st.steps_interesting[steps_bucket(p.metrics.steps)];
            int gb = givens_bucket(p.used_assumptions, static_cast<int>(set.assumptions.size()));
            if (gb >= 0) ++st.givens[gb];
        }
        if (p.strictly_interesting) {
            ++st.strictly_interesting;
            ++st.steps_strict[steps_bucket(p.metrics.steps)];
        }
    }
    st.goal_partitions = static_cast<double>(set.goal_classes.size());
    std::cout << render_stats_block(st);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthesizes, queries, and grades Euclidean geometry proof problems"};
    app.require_subcommand(1);

    std::string fig_path, rules_path, out_path, stats_path, dump_path, set_path;
    std::string problem_id, goal_text, script_path;
    std::string width_s, length_s, steps_s, goal_types_s, source_types_s;
    std::vector<std::string> given, shape;
    double eps = kDefaultEps;
    bool serial = false;

    auto* syn = app.add_subcommand("synthesize", "run the full synthesis pipeline on a figure");
    syn->add_option("figure", fig_path, "figure file")->required();
    syn->add_option("--rules", rules_path, "rule config file");
    syn->add_option("--eps", eps, "numeric tolerance");
    syn->add_option("--out", out_path, "problem-set output path");
    syn->add_option("--stats", stats_path, "stats block output path");
    syn->add_option("--dump", dump_path, "hypergraph dump path");
    syn->add_flag("--serial", serial, "disable parallel saturation");

    auto* qry = app.add_subcommand("query", "filter a problem set");
    qry->add_option("problems", set_path, "problem-set file")->required();
    qry->add_option("--width", width_s, "width range a:b");
    qry->add_option("--length", length_s, "length range a:b");
    qry->add_option("--steps", steps_s, "steps range a:b");
    qry->add_option("--goal-type", goal_types_s, "goal kinds, comma separated");
    qry->add_option("--source-type", source_types_s, "source kinds, comma separated");
    qry->add_option("--out", out_path, "output path");

    auto* hnt = app.add_subcommand("hint", "next step for a problem");
    hnt->add_option("problems", set_path, "problem-set file")->required();
    hnt->add_option("--problem", problem_id, "problem id")->required();
    hnt->add_option("--given", given, "established proposition (repeatable)");

    auto* grd = app.add_subcommand("grade", "grade a proof script");
    grd->add_option("figure", fig_path, "figure file")->required();
    grd->add_option("script", script_path, "proof script")->required();
    grd->add_option("--goal", goal_text, "goal proposition");
    grd->add_option("--rules", rules_path, "rule config file");
    grd->add_option("--eps", eps, "numeric tolerance");

    auto* cls = app.add_subcommand("classify", "strongest class of figure shapes");
    cls->add_option("figure", fig_path, "figure file")->required();
    cls->add_option("--shape", shape, "point tuple (3 or 4 names)")->expected(3, 4);
    cls->add_option("--eps", eps, "numeric tolerance");

    auto* sts = app.add_subcommand("stats", "stats block of a problem set");
    sts->add_option("problems", set_path, "problem-set file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (syn->parsed())
            return cmd_synthesize(fig_path, rules_path, eps, out_path, stats_path, dump_path,
                                  serial);
        if (qry->parsed()) {
            Query q;
            q.width = parse_range(width_s);
            q.length = parse_range(length_s);
            q.steps = parse_range(steps_s);
            q.goal_types = parse_kinds(goal_types_s);
            q.source_types = parse_kinds(source_types_s);
            return cmd_query(set_path, q, out_path);
        }
        if (hnt->parsed()) return cmd_hint(set_path, problem_id, given);
        if (grd->parsed()) return cmd_grade(fig_path, script_path, goal_text, rules_path, eps);
        if (cls->parsed()) return cmd_classify(fig_path, shape, eps);
        if (sts->parsed()) return cmd_stats(set_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
