// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mgv/errors.hpp"

namespace mgv {

// Fixed catalog of 20 problem-solving strategies rendered into the
// strategy-selection prompt in this exact order.
struct StrategyCatalog {
    std::vector<std::string> strategies;

    // Throws ValidationError unless there are exactly 20 distinct lowercase entries.
    void validate() const;
    bool contains(const std::string& name) const;
};

StrategyCatalog default_catalog();

enum class PromptKind {
    Monitor,
    StrategySelect,
    Execute,
    Verify,
    SVRewrite,
    SVBackward,
    SRGenerate,
    SRFeedback,
    SRRefine,
};

// What the t>0 monitor/execute templates need from the preceding cycle.
struct PreviousCycle {
    double difficulty = 0.0;
    std::vector<std::string> task_features;
    std::string strategy;
    std::string solution_text;
    double coherence = 0.0;
    double plausibility = 0.0;
    double consistency = 0.0;
    double goal_conduciveness = 0.0;
    std::string evaluation_text;
};

struct RenderContext {
    std::string problem;
    int cycle_index = 0;
    std::optional<std::vector<std::string>> task_features;
    std::optional<double> difficulty;
    std::optional<std::string> strategy;
    std::optional<PreviousCycle> previous_cycle;
    std::optional<std::string> solution;
    std::optional<std::string> candidate_answer;
    std::optional<std::string> history;
};

// Renders the template for `kind` with variables substituted. Pure: identical
// inputs yield identical text. Throws MissingField when a field the kind
// requires is absent.
std::string render(PromptKind kind, const RenderContext& ctx, const StrategyCatalog& catalog);

// Raw embedded templates, for the `prompts dump` CLI subcommand.
void dump_templates(std::ostream& os);

} // namespace mgv
