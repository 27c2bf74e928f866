// SPDX-License-Identifier: Apache-2.0
#include "mgv/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

namespace mgv {
namespace {

// --- embedded templates -----------------------------------------------------
// Stored with exact line structure; substitution never re-wraps lines.

constexpr const char* kMonitorFirstCycle =
R"(Problem: {problem}

Before you <think>, analyse this problem WITHOUT solving it.

Output format:
<monitor>
Task_Features: List 2-3 keywords describing the math concepts needed
Difficulty (0-1): Assess the challenge level
</monitor>)";

constexpr const char* kMonitorLaterCycle =
R"(Problem: {problem}
evaluation_scores:
coherence: {coherence}
plausibility: {plausibility}
consistency: {consistency}
goal_conduciveness: {goal_conduciveness}

Before you <think>, analyse this problem WITHOUT solving it.

Output format:
<monitor>
Task_Features: List 2-3 keywords describing the math concepts needed
Difficulty (0-1): Assess the challenge level
Recalibrate your assessment based on the
evaluation_scores in previous_cycle. Lower scores
suggest higher actual difficulty than previously assessed.
</monitor>)";

constexpr const char* kStrategySelect =
R"(Problem: {problem}
Task features: {task_features}
Difficulty: {difficulty:.3f}
Available strategies: {comma_separated_strategy_list}

Select ONE strategy from the list above that best fits this problem.

Output format:
Selected Strategy: [exact strategy name from list])";

constexpr const char* kExecuteFirstCycle =
R"(Problem: {problem}
Strategy: {strategy_type}

Output format:
<think>
Work through the problem step by step using the {strategy_type} approach.
Show all calculations and reasoning.
</think>

<answer>
Output only the final numerical answer (no units or text).
</answer>)";

constexpr const char* kExecuteLaterCycle =
R"(Problem: {problem}
Strategy: {strategy_type}

Output format:
<think>
Work through the problem step by step using the {strategy_type} approach.
Show all calculations and reasoning.
previous_cycle:
difficulty: {prev_difficulty}
task_features: {prev_task_features}
strategy_used: {prev_strategy}
reasoning: {prev_reasoning}
evaluation_scores:
coherence: {coherence}
plausibility: {plausibility}
consistency: {consistency}
goal_conduciveness: {goal_conduciveness}
evaluation: {prev_evaluation}
</think>

<answer>
Output only the final numerical answer (no units or text).
</answer>)";

constexpr const char* kVerify =
R"(Problem: {problem}
Solution: {solution}

Evaluate this solution on these dimensions (0-1 scale):

1. COHERENCE: Do the steps logically connect?
2. PLAUSIBILITY: Is the approach reasonable?
3. CONSISTENCY: Are calculations correct?
4. GOAL-CONDUCIVENESS: Does it answer the question?

Output format:
<evaluate>
Coherence: X.X
Plausibility: X.X
Consistency: X.X
Goal-conduciveness: X.X

Evaluation: [Provide a 2-3 sentence analysis explaining the scores.
Identify specific errors or strengths. For low scores, indicate
what went wrong (e.g., "arithmetic error in step 3", "misunderstood
the question", "skipped crucial reasoning"). For high scores, note
what worked well. Be specific and actionable.]
</evaluate>)";

constexpr const char* kSRGenerate =
R"(Problem: {problem}

Solve this problem step by step. Show all calculations and reasoning.

Output format:
<think>
Work through the problem step by step.
</think>

<answer>
Output only the final numerical answer (no units or text).
</answer>)";

constexpr const char* kSRFeedback =
R"(Problem: {problem}
Proposed solution: {solution}

Review the proposed solution. Check every calculation and check whether
the final answer actually answers the question.

Output format:
Feedback: [2-3 sentences identifying specific errors, or confirming the
solution is sound.]

End with exactly one line:
VERDICT: CORRECT
or
VERDICT: REVISE)";

constexpr const char* kSRRefine =
R"(Problem: {problem}

Previous attempts and feedback:
{history}

Write an improved solution that addresses all feedback above.

Output format:
<think>
Work through the problem step by step.
</think>

<answer>
Output only the final numerical answer (no units or text).
</answer>)";

constexpr const char* kSVRewrite =
R"(Problem: {problem}
Answer: {answer}

Rewrite the question and its answer as a single declarative statement.
The statement must contain the answer value {answer} verbatim.

Output format:
One declarative sentence.)";

constexpr const char* kSVBackward =
R"({masked_problem}

Find X. Work backwards from the stated conclusion, showing all
calculations and reasoning.

End with exactly one line:
X = <number>)";

// --- substitution helpers ----------------------------------------------------

void replace_all(std::string& text, const std::string& token, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
}

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += items[i];
    }
    return out;
}

void substitute_scores(std::string& text, const PreviousCycle& prev) {
    replace_all(text, "{coherence}", fixed(prev.coherence, 2));
    replace_all(text, "{plausibility}", fixed(prev.plausibility, 2));
    replace_all(text, "{consistency}", fixed(prev.consistency, 2));
    replace_all(text, "{goal_conduciveness}", fixed(prev.goal_conduciveness, 2));
}

template <typename T>
const T& require(const std::optional<T>& field, const char* name, PromptKind kind) {
    if (!field) {
        throw MissingField(std::string("prompt field '") + name + "' required for kind " +
                           std::to_string(static_cast<int>(kind)));
    }
    return *field;
}

} // namespace

void StrategyCatalog::validate() const {
    if (strategies.size() != 20) {
        throw ValidationError("strategy catalog must have exactly 20 entries, got " +
                              std::to_string(strategies.size()));
    }
    std::set<std::string> seen;
    for (const auto& s : strategies) {
        if (s.empty()) throw ValidationError("strategy catalog entry is empty");
        if (!seen.insert(s).second) throw ValidationError("duplicate strategy: " + s);
        for (char c : s) {
            if (std::isupper(static_cast<unsigned char>(c))) {
                throw ValidationError("strategy not lowercase: " + s);
            }
        }
    }
}

bool StrategyCatalog::contains(const std::string& name) const {
    return std::find(strategies.begin(), strategies.end(), name) != strategies.end();
}

StrategyCatalog default_catalog() {
    return StrategyCatalog{{
        "multiplication and addition",
        "basic arithmetic",
        "addition and multiplication",
        "arithmetic operations",
        "multiplication",
        "percentage calculations",
        "subtraction",
        "algebra",
        "subtraction and division",
        "multiplication and division",
        "multiplication and subtraction",
        "addition and subtraction",
        "percentage calculation",
        "addition subtraction",
        "average calculation",
        "subtraction multiplication",
        "division",
        "addition",
        "linear equations",
        "algebraic reasoning",
    }};
}

std::string render(PromptKind kind, const RenderContext& ctx, const StrategyCatalog& catalog) {
    std::string text;
    switch (kind) {
    case PromptKind::Monitor: {
        if (ctx.cycle_index > 0) {
            const auto& prev = require(ctx.previous_cycle, "previous_cycle", kind);
            text = kMonitorLaterCycle;
            substitute_scores(text, prev);
        } else {
            text = kMonitorFirstCycle;
        }
        break;
    }
    case PromptKind::StrategySelect: {
        text = kStrategySelect;
        replace_all(text, "{task_features}", join(require(ctx.task_features, "task_features", kind)));
        replace_all(text, "{difficulty:.3f}", fixed(require(ctx.difficulty, "difficulty", kind), 3));
        replace_all(text, "{comma_separated_strategy_list}", join(catalog.strategies));
        break;
    }
    case PromptKind::Execute: {
        const auto& strategy = require(ctx.strategy, "strategy", kind);
        if (ctx.cycle_index > 0) {
            const auto& prev = require(ctx.previous_cycle, "previous_cycle", kind);
            text = kExecuteLaterCycle;
            replace_all(text, "{prev_difficulty}", fixed(prev.difficulty, 3));
            replace_all(text, "{prev_task_features}", join(prev.task_features));
            replace_all(text, "{prev_strategy}", prev.strategy);
            replace_all(text, "{prev_reasoning}", prev.solution_text);
            substitute_scores(text, prev);
            replace_all(text, "{prev_evaluation}", prev.evaluation_text);
        } else {
            text = kExecuteFirstCycle;
        }
        replace_all(text, "{strategy_type}", strategy);
        break;
    }
    case PromptKind::Verify:
        text = kVerify;
        replace_all(text, "{solution}", require(ctx.solution, "solution", kind));
        break;
    case PromptKind::SVRewrite:
        text = kSVRewrite;
        replace_all(text, "{answer}", require(ctx.candidate_answer, "candidate_answer", kind));
        break;
    case PromptKind::SVBackward:
        // The masked problem arrives through ctx.problem.
        text = kSVBackward;
        replace_all(text, "{masked_problem}", ctx.problem);
        break;
    case PromptKind::SRGenerate:
        text = kSRGenerate;
        break;
    case PromptKind::SRFeedback:
        text = kSRFeedback;
        replace_all(text, "{solution}", require(ctx.solution, "solution", kind));
        break;
    case PromptKind::SRRefine:
        text = kSRRefine;
        replace_all(text, "{history}", require(ctx.history, "history", kind));
        break;
    default:
        throw InvalidKind("unknown prompt kind " + std::to_string(static_cast<int>(kind)));
    }
    replace_all(text, "{problem}", ctx.problem);
    return text;
}

void dump_templates(std::ostream& os) {
    const std::pair<const char*, const char*> sections[] = {
        {"monitor (first cycle)", kMonitorFirstCycle},
        {"monitor (later cycles)", kMonitorLaterCycle},
        {"strategy-select", kStrategySelect},
        {"execute (first cycle)", kExecuteFirstCycle},
        {"execute (later cycles)", kExecuteLaterCycle},
        {"verify", kVerify},
        {"generate (baselines)", kSRGenerate},
        {"feedback (self-refine)", kSRFeedback},
        {"refine (self-refine)", kSRRefine},
        {"rewrite (self-verification)", kSVRewrite},
        {"backward (self-verification)", kSVBackward},
    };
    for (const auto& [name, body] : sections) {
        os << "=== " << name << " ===\n" << body << "\n\n";
    }
    os << "=== strategy catalog ===\n";
    for (const auto& s : default_catalog().strategies) os << s << "\n";
}

} // namespace mgv
