// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mgv/gateway.hpp"
#include "mgv/parsing.hpp"
#include "mgv/prompts.hpp"
#include "mgv/task.hpp"

namespace mgv {

struct RunConfig {
    int max_cycles = 3;                 // T
    double termination_threshold = 0.85;
    int base_tokens = 400;
    int token_scale = 400;
    double base_temperature = 0.3;
    double temperature_scale = 0.2;
    int verify_tokens = 300;
    int monitor_tokens = 300;
    int strategy_tokens = 100;
    double aux_temperature = 0.0;       // monitor/strategy/verify calls

    void validate() const;
};

enum class ControllerState { ACTIVE, TERMINATE };

struct GenerationParams {
    int max_tokens = 0;
    double temperature = 0.0;
};

// Full trace of one monitor-generate-verify cycle. raw_texts holds the prompt
// and response of each phase so a run can be replayed from the transcript.
struct CycleRecord {
    int cycle_index = 0;
    DifficultyAssessment assessment;
    std::string strategy;
    GenerationParams generation_params;
    ParsedSolution solution;
    EvaluationScores scores;
    std::map<std::string, std::string> raw_texts;
};

struct MgvOutcome {
    double final_answer = 0.0;
    int chosen_cycle = 0;
    std::vector<CycleRecord> cycles;
    int attempts = 0;
    double wall_time_s = 0.0;
};

// Raised when a run dies mid-loop; carries the cycles completed so far so the
// harness can persist the partial transcript.
class MgvRunError : public Error {
public:
    MgvRunError(const std::string& what, std::vector<CycleRecord> completed)
        : Error(what), cycles_(std::move(completed)) {}
    const std::vector<CycleRecord>& partial_cycles() const { return cycles_; }

private:
    std::vector<CycleRecord> cycles_;
};

// max_tokens = round(base + scale * difficulty), round half up;
// temperature = base + scale * difficulty.
GenerationParams adaptive_generation_params(double difficulty, const RunConfig& config);

// TERMINATE iff mean(scores) >= threshold or this was the last budgeted cycle.
ControllerState should_terminate(const EvaluationScores& scores, int cycle_index,
                                 const RunConfig& config);

// Executes the four phase calls of one cycle (monitor, strategy-select,
// execute, verify). Parser failures degrade: difficulty defaults to 0.5,
// unparseable evaluations score (0,0,0,0) with diagnostic "unparseable
// evaluation". Gateway errors propagate.
CycleRecord run_cycle(const Task& task, int cycle_index, const CycleRecord* previous,
                      const RunConfig& config, Backend& backend,
                      const StrategyCatalog& catalog);

// Answer of the cycle with maximal mean score; ties go to the earliest cycle;
// cycles without a parseable answer are excluded. Throws NoAnswer.
std::pair<double, int> select_final_answer(const std::vector<CycleRecord>& cycles);

MgvOutcome run_mgv(const Task& task, const RunConfig& config, Backend& backend,
                   const StrategyCatalog& catalog);

} // namespace mgv
