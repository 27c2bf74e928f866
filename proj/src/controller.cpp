// SPDX-License-Identifier: Apache-2.0
#include "mgv/controller.hpp"

#include <chrono>
#include <cmath>

namespace mgv {
namespace {

constexpr double kDifficultyFallback = 0.5; // used when the monitor phase fails to parse

PreviousCycle to_previous(const CycleRecord& rec) {
    PreviousCycle prev;
    prev.difficulty = rec.assessment.difficulty;
    prev.task_features = rec.assessment.task_features;
    prev.strategy = rec.strategy;
    auto it = rec.raw_texts.find("execute_response");
    prev.solution_text = it == rec.raw_texts.end() ? "" : it->second;
    prev.coherence = rec.scores.coherence;
    prev.plausibility = rec.scores.plausibility;
    prev.consistency = rec.scores.consistency;
    prev.goal_conduciveness = rec.scores.goal_conduciveness;
    prev.evaluation_text = rec.scores.diagnostic;
    return prev;
}

} // namespace

void RunConfig::validate() const {
    if (max_cycles < 1) throw ValidationError("max_cycles must be >= 1");
    if (termination_threshold <= 0.0 || termination_threshold > 1.0) {
        throw ValidationError("termination_threshold must be in (0, 1]");
    }
    if (base_tokens < 1 || verify_tokens < 1 || monitor_tokens < 1 || strategy_tokens < 1) {
        throw ValidationError("token budgets must be >= 1");
    }
}

GenerationParams adaptive_generation_params(double difficulty, const RunConfig& config) {
    GenerationParams params;
    params.max_tokens = static_cast<int>(
        std::floor(config.base_tokens + config.token_scale * difficulty + 0.5));
    params.temperature = config.base_temperature + config.temperature_scale * difficulty;
    return params;
}

ControllerState should_terminate(const EvaluationScores& scores, int cycle_index,
                                 const RunConfig& config) {
    if (scores.mean() >= config.termination_threshold) return ControllerState::TERMINATE;
    if (cycle_index >= config.max_cycles - 1) return ControllerState::TERMINATE;
    return ControllerState::ACTIVE;
}

CycleRecord run_cycle(const Task& task, int cycle_index, const CycleRecord* previous,
                      const RunConfig& config, Backend& backend,
                      const StrategyCatalog& catalog) {
    CycleRecord rec;
    rec.cycle_index = cycle_index;

    RenderContext ctx;
    ctx.problem = task.question;
    ctx.cycle_index = cycle_index;
    if (cycle_index > 0 && previous) ctx.previous_cycle = to_previous(*previous);

    // Monitor
    const std::string monitor_prompt = render(PromptKind::Monitor, ctx, catalog);
    const auto monitor_resp = backend.complete(
        {monitor_prompt, config.monitor_tokens, config.aux_temperature});
    rec.raw_texts["monitor_prompt"] = monitor_prompt;
    rec.raw_texts["monitor_response"] = monitor_resp.text;
    try {
        rec.assessment = parse_monitor_block(monitor_resp.text);
    } catch (const MonitorParseError&) {
        rec.assessment = {kDifficultyFallback, {"unspecified"}};
    }

    // Generate: strategy selection, then execution with adaptive params.
    ctx.task_features = rec.assessment.task_features;
    ctx.difficulty = rec.assessment.difficulty;
    const std::string strategy_prompt = render(PromptKind::StrategySelect, ctx, catalog);
    const auto strategy_resp = backend.complete(
        {strategy_prompt, config.strategy_tokens, config.aux_temperature});
    rec.raw_texts["strategy_prompt"] = strategy_prompt;
    rec.raw_texts["strategy_response"] = strategy_resp.text;
    rec.strategy = parse_strategy_selection(strategy_resp.text, catalog);

    rec.generation_params = adaptive_generation_params(rec.assessment.difficulty, config);
    ctx.strategy = rec.strategy;
    const std::string execute_prompt = render(PromptKind::Execute, ctx, catalog);
    const auto execute_resp = backend.complete(
        {execute_prompt, rec.generation_params.max_tokens, rec.generation_params.temperature});
    rec.raw_texts["execute_prompt"] = execute_prompt;
    rec.raw_texts["execute_response"] = execute_resp.text;
    try {
        rec.solution = parse_solution(execute_resp.text);
    } catch (const SolutionParseError&) {
        rec.solution = {extract_tag(execute_resp.text, "think").value_or(""), "", std::nullopt};
    }

    // Verify
    ctx.solution = execute_resp.text;
    const std::string verify_prompt = render(PromptKind::Verify, ctx, catalog);
    const auto verify_resp = backend.complete(
        {verify_prompt, config.verify_tokens, config.aux_temperature});
    rec.raw_texts["verify_prompt"] = verify_prompt;
    rec.raw_texts["verify_response"] = verify_resp.text;
    try {
        rec.scores = parse_evaluation_block(verify_resp.text);
    } catch (const EvaluationParseError&) {
        rec.scores = {0.0, 0.0, 0.0, 0.0, "unparseable evaluation"};
    }
    return rec;
}

std::pair<double, int> select_final_answer(const std::vector<CycleRecord>& cycles) {
    int best = -1;
    double best_mean = 0.0;
    for (size_t i = 0; i < cycles.size(); ++i) {
        if (!cycles[i].solution.answer_value) continue;
        const double m = cycles[i].scores.mean();
        if (best < 0 || m > best_mean) {
            best = static_cast<int>(i);
            best_mean = m;
        }
    }
    if (best < 0) throw NoAnswer("no cycle produced a parseable answer");
    return {*cycles[best].solution.answer_value, best};
}

MgvOutcome run_mgv(const Task& task, const RunConfig& config, Backend& backend,
                   const StrategyCatalog& catalog) {
    config.validate();
    catalog.validate();
    const auto start = std::chrono::steady_clock::now();
    std::vector<CycleRecord> cycles;
    try {
        for (int t = 0; t < config.max_cycles; ++t) {
            const CycleRecord* previous = cycles.empty() ? nullptr : &cycles.back();
            cycles.push_back(run_cycle(task, t, previous, config, backend, catalog));
            if (should_terminate(cycles.back().scores, t, config) ==
                ControllerState::TERMINATE) {
                break;
            }
        }
        const auto [answer, chosen] = select_final_answer(cycles);
        MgvOutcome outcome;
        outcome.final_answer = answer;
        outcome.chosen_cycle = chosen;
        outcome.attempts = static_cast<int>(cycles.size());
        outcome.cycles = std::move(cycles);
        outcome.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return outcome;
    } catch (const MgvRunError&) {
        throw;
    } catch (const Error& e) {
        throw MgvRunError(e.what(), std::move(cycles));
    }
}

} // namespace mgv
