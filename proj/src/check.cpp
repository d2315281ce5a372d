#include "geo/check.hpp"

#include <algorithm>
#include <set>

namespace geo {

const char* step_verdict_name(StepVerdict v) {
    switch (v) {
        case StepVerdict::Ok: return "ok";
        case StepVerdict::UnknownRule: return "unknown rule";
        case StepVerdict::UnknownPremise: return "unknown premise";
        case StepVerdict::RuleMismatch: return "rule mismatch";
        case StepVerdict::WrongCorrespondence: return "wrong correspondence";
    }
    return "?";
}

StepVerdict validate_step(const ProofStep& step, const std::vector<Prop>& available,
                          const Figure& fig, double eps) {
    if (!Catalog::standard().has_rule(step.rule)) return StepVerdict::UnknownRule;
    std::set<Prop> avail(available.begin(), available.end());
    for (const Prop& p : intrinsic_facts(fig, eps).facts) avail.insert(p);
    for (const Prop& p : step.premises)
        if (!avail.count(canonicalize(p))) return StepVerdict::UnknownPremise;

    FactSet facts;
    for (const Prop& p : step.premises) facts.add(canonicalize(p));
    for (const Prop& p : intrinsic_facts(fig, eps).facts) facts.add(p);
    MatchEnv env;
    env.figure = &fig;
    env.eps = eps;
    Prop want = canonicalize(step.conclusion);
    bool same_shape = false;
    for (const Instance& inst : instantiate(step.rule, facts, env)) {
        if (inst.conclusion == want) return StepVerdict::Ok;
        if (inst.conclusion.kind == want.kind &&
            (want.kind == PropKind::TriCong || want.kind == PropKind::TriSim)) {
            std::multiset<PointId> mi(inst.conclusion.pts.begin(),
                                      inst.conclusion.pts.begin() + inst.conclusion.n);
            std::multiset<PointId> mw(want.pts.begin(), want.pts.begin() + want.n);
            if (mi == mw) same_shape = true;
        }
    }
    return same_shape ? StepVerdict::WrongCorrespondence : StepVerdict::RuleMismatch;
}

bool replay_solution(const std::vector<ProofStep>& steps, const std::vector<Prop>& givens,
                     const Prop& goal, const Figure& fig, double eps, std::string* why) {
    std::vector<Prop> avail = givens;
    bool goal_seen = false;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        StepVerdict v = validate_step(steps[i], avail, fig, eps);
        if (v != StepVerdict::Ok) {
            if (why)
                *why = "step " + std::to_string(i + 1) + ": " + step_verdict_name(v) + " (" +
                       steps[i].rule + ")";
            return false;
        }
        avail.push_back(canonicalize(steps[i].conclusion));
        if (avail.back() == canonicalize(goal)) goal_seen = true;
    }
    if (!goal_seen) {
        if (why) *why = "goal not established";
        return false;
    }
    return true;
}

ProofStep step_from_edge(const Hypergraph& h, EdgeId e) {
    ProofStep s;
    const Edge& ed = h.edge(e);
    s.rule = ed.rule;
    for (NodeId src : ed.sources) s.premises.push_back(h.node(src).prop);
    s.conclusion = h.node(ed.target).prop;
    return s;
}

GradeReport grade(const Figure& fig, const std::vector<ProofStep>& script, const Prop& goal,
                  const Synthesis* syn, double eps) {
    GradeReport rep;
    std::vector<Prop> avail = fig.assumptions;
    bool all_ok = true;
    for (std::size_t i = 0; i < script.size(); ++i) {
        GradeStepReport sr;
        sr.index = static_cast<int>(i);
        sr.verdict = validate_step(script[i], avail, fig, eps);
        if (sr.verdict != StepVerdict::Ok) {
            all_ok = false;
            sr.detail = step_verdict_name(sr.verdict);
        } else {
            avail.push_back(canonicalize(script[i].conclusion));
        }
        rep.steps.push_back(sr);
    }
    Prop want = canonicalize(goal);
    if (script.empty() || !all_ok) {
        rep.correct = false;
        rep.reason = script.empty() ? "goal not established" : "invalid steps";
        return rep;
    }
    if (canonicalize(script.back().conclusion) != want) {
        rep.correct = false;
        rep.reason = "goal not established";
        return rep;
    }
    rep.correct = true;
    if (syn) {
        NodeId g = syn->graph.find(want);
        if (g >= 0) {
            int best = -1;
            for (const Problem& p : syn->problems) {
                if (p.goal != g || p.converse) continue;
                if (best < 0 || static_cast<int>(p.solution.size()) < best)
                    best = static_cast<int>(p.solution.size());
            }
            if (best >= 0 && best < static_cast<int>(script.size()))
                rep.shorter_solution_steps = best;
        }
    }
    return rep;
}

HintResult hint_next_step(const Hypergraph& h, const Problem& p,
                          const std::vector<Prop>& established) {
    HintResult r;
    std::set<Prop> have;
    for (NodeId s : p.sources) have.insert(h.node(s).prop);
    for (const Prop& e : established) {
        Prop c = canonicalize(e);
        bool known = h.contains(c);
        if (!known) {
            r.ok = false;
            r.error = "unknown proposition among established facts";
            return r;
        }
        have.insert(c);
    }
    if (have.count(h.node(p.goal).prop)) {
        r.complete = true;
        return r;
    }
    for (EdgeId e : p.solution) {
        const Edge& ed = h.edge(e);
        const Prop& concl = h.node(ed.target).prop;
        if (have.count(concl)) continue;
        bool ready = true;
        for (NodeId s : ed.sources) {
            if (h.node(s).provenance == Provenance::Intrinsic) continue;
            if (!have.count(h.node(s).prop)) { ready = false; break; }
        }
        if (ready) {
            r.next = step_from_edge(h, e);
            return r;
        }
    }
    // nothing ready: either done via other facts or inconsistent state
    r.complete = have.count(h.node(p.goal).prop) != 0;
    if (!r.complete) {
        r.ok = false;
        r.error = "no applicable next step";
    }
    return r;
}

}  // namespace geo
