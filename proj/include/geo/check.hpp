#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geo/catalog.hpp"
#include "geo/figure.hpp"
#include "geo/synth.hpp"

namespace geo {

/// One proof step: premises, rule, conclusion (all canonical).
struct ProofStep {
    std::vector<Prop> premises;
    std::string rule;
    Prop conclusion;
};

enum class StepVerdict { Ok, UnknownRule, UnknownPremise, RuleMismatch, WrongCorrespondence };

const char* step_verdict_name(StepVerdict v);

/// Validates a single step: every premise must be available and the rule must
/// license the conclusion from exactly these premises (intrinsic facts of the
/// figure are supplied implicitly).
StepVerdict validate_step(const ProofStep& step, const std::vector<Prop>& available,
                          const Figure& fig, double eps);

/// Replays a full solution: each step checked by validate_step in order,
/// conclusions accumulate. Independent of how solutions were found.
bool replay_solution(const std::vector<ProofStep>& steps, const std::vector<Prop>& givens,
                     const Prop& goal, const Figure& fig, double eps,
                     std::string* why = nullptr);

ProofStep step_from_edge(const Hypergraph& h, EdgeId e);

struct GradeStepReport {
    int index = 0;
    StepVerdict verdict = StepVerdict::Ok;
    std::string detail;
};

struct GradeReport {
    bool correct = false;
    std::string reason;                  // when incorrect
    std::vector<GradeStepReport> steps;  // per-step diagnostics
    int shorter_solution_steps = -1;     // suggestion when a shorter one exists
};

/// Grades a proof script against a figure and goal; synthesized problems (when
/// provided) power the succinctness suggestion.
GradeReport grade(const Figure& fig, const std::vector<ProofStep>& script, const Prop& goal,
                  const Synthesis* syn, double eps);

struct HintResult {
    bool complete = false;
    bool ok = true;
    std::string error;
    ProofStep next;  // when !complete && ok
};

/// Earliest solution step whose premises are all established and whose
/// conclusion is new.
HintResult hint_next_step(const Hypergraph& h, const Problem& p,
                          const std::vector<Prop>& established);

}  // namespace geo
