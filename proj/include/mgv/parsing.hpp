// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgv/errors.hpp"
#include "mgv/prompts.hpp"

namespace mgv {

// Monitor-phase result: difficulty in [0,1] plus 1-5 task feature keywords.
struct DifficultyAssessment {
    double difficulty = 0.0;
    std::vector<std::string> task_features;
};

// Verify-phase result: four dimension scores in [0,1] plus diagnostic text.
struct EvaluationScores {
    double coherence = 0.0;
    double plausibility = 0.0;
    double consistency = 0.0;
    double goal_conduciveness = 0.0;
    std::string diagnostic;

    double mean() const {
        return (coherence + plausibility + consistency + goal_conduciveness) / 4.0;
    }
};

// Execute-phase result. answer_value is set iff answer_raw normalizes to a number.
struct ParsedSolution {
    std::string reasoning;
    std::string answer_raw;
    std::optional<double> answer_value;
};

// Content between <tag> and </tag> (case-insensitive). Unterminated tags run
// to the end of the text. nullopt when the opening tag is absent.
std::optional<std::string> extract_tag(const std::string& text, const std::string& tag);

// Extracts difficulty and task features from a monitor response. Falls back to
// whole-text scanning when the <monitor> block is missing; clamps difficulty to
// [0,1]; caps features at 5 and substitutes {"unspecified"} when none parse.
// Throws MonitorParseError when no difficulty number can be located at all.
DifficultyAssessment parse_monitor_block(const std::string& output);

// Maps a strategy-selection response onto a catalog member. Exact
// case-insensitive match first, then highest token overlap, then the default
// ("basic arithmetic"). Total: never throws.
std::string parse_strategy_selection(const std::string& output, const StrategyCatalog& catalog);

// Extracts reasoning (<think>) and the answer (<answer>, else the last
// number-bearing token). Throws SolutionParseError when the output contains no
// numeric token at all.
ParsedSolution parse_solution(const std::string& output);

// Extracts the four labeled scores (case-insensitive, hyphen/underscore
// tolerant), clamped to [0,1], and the diagnostic text after "Evaluation:".
// Throws EvaluationParseError when fewer than four scores are present.
EvaluationScores parse_evaluation_block(const std::string& output);

// Strips currency symbols, thousands separators, percent signs and surrounding
// units, then parses a signed decimal. Throws NotANumber.
double normalize_answer(const std::string& raw);

// |a-b| <= 1e-6 * max(1, |a|, |b|)
bool answers_equal(double a, double b);

// Canonical text form of a numeric answer: integers without a decimal point.
std::string format_number(double value);

} // namespace mgv
