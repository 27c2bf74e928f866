// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mgv/gateway.hpp"
#include "mgv/parsing.hpp"
#include "mgv/prompts.hpp"
#include "mgv/task.hpp"

namespace mgv {

// ---- Self-Verification ------------------------------------------------------

struct SelfVerificationConfig {
    int num_candidates = 3;    // K
    int verification_rounds = 1; // P
    double gen_temperature = 0.3;
    int gen_tokens = 800;
    double verify_temperature = 0.3;
    int verify_tokens = 800;
    int rewrite_tokens = 200;

    void validate() const;
};

// A numeric quantity in the problem statement and where it sits.
struct Condition {
    std::string value;
    size_t begin = 0;
    size_t end = 0;
};

struct Reconstruction {
    std::string condition;
    std::optional<double> reconstructed;
    bool matched = false;
};

struct CandidateRecord {
    std::optional<double> answer; // absent when the sample had no parseable answer
    std::string solution_text;
    std::string conclusion;
    int verification_score = 0;
    std::vector<Reconstruction> reconstructions;
};

// Candidate awaiting verification: sampled solution plus its rewritten conclusion.
struct CandidateDraft {
    std::optional<double> answer;
    std::string solution_text;
    std::string conclusion;
};

struct SelfVerificationOutcome {
    double final_answer = 0.0;
    int attempts = 0;
    int chosen_candidate = 0;
    std::vector<CandidateRecord> candidates;
    double wall_time_s = 0.0;
};

// Numeric quantities in order of appearance. The span covers the numeral only,
// so adjacent currency/percent markers survive masking. Throws NoConditions.
std::vector<Condition> extract_conditions(const std::string& problem);

// Replaces the indexed condition with the literal "X" and appends the
// conclusion sentence. Throws std::out_of_range on a bad index.
std::string mask_condition(const std::string& problem, size_t index,
                           const std::string& conclusion);

// One rewrite call turning problem + answer into a declarative statement.
// Throws RewriteError on empty model output.
std::string rewrite_as_statement(const std::string& problem, double answer, Backend& backend,
                                 int max_tokens = 200, double temperature = 0.3);

// Last "X = <number>" line of a backward-reasoning response; nullopt when absent.
std::optional<double> parse_backward_reconstruction(const std::string& output);

// P rounds of mask-and-reconstruct over every condition; score counts matches.
CandidateRecord score_candidate(const std::string& problem, const CandidateDraft& candidate,
                                const std::vector<Condition>& conditions,
                                const SelfVerificationConfig& config, Backend& backend);

// Argmax of verification score; ties resolved by majority vote among the tied
// candidates' answers, then by the earliest candidate. Pure selection rule,
// exposed for direct testing.
int select_candidate(const std::vector<CandidateRecord>& candidates);

SelfVerificationOutcome run_self_verification(const Task& task,
                                              const SelfVerificationConfig& config,
                                              Backend& backend);

// ---- SELF-REFINE -------------------------------------------------------------

struct SelfRefineConfig {
    int max_iterations = 3;
    double temperature = 0.3;
    int tokens = 800;

    void validate() const;
};

struct RefineRecord {
    int iteration = 0;
    std::string output;   // y_t
    std::string feedback; // fb_t
    bool positive = false; // CORRECT verdict
};

struct SelfRefineOutcome {
    double final_answer = 0.0;
    int attempts = 0; // generate/refine outputs produced
    std::vector<RefineRecord> history;
    double wall_time_s = 0.0;
};

// Raised when the final output has no parseable answer; carries the history.
class SelfRefineNoAnswer : public NoAnswer {
public:
    SelfRefineNoAnswer(const std::string& what, std::vector<RefineRecord> history)
        : NoAnswer(what), history_(std::move(history)) {}
    const std::vector<RefineRecord>& history() const { return history_; }

private:
    std::vector<RefineRecord> history_;
};

// True iff the last VERDICT sentinel in the feedback reads CORRECT.
bool is_positive_feedback(const std::string& feedback);

SelfRefineOutcome run_self_refine(const Task& task, const SelfRefineConfig& config,
                                  Backend& backend);

} // namespace mgv
