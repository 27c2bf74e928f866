// SPDX-License-Identifier: Apache-2.0
#include "mgv/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <regex>
#include <stdexcept>

namespace mgv {
namespace {

const StrategyCatalog& catalog() {
    static const StrategyCatalog c = default_catalog();
    return c;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> lenient_answer(const std::string& output) {
    try {
        return parse_solution(output).answer_value;
    } catch (const SolutionParseError&) {
        return std::nullopt;
    }
}

// Earliest index whose answer is shared by the most members of `indices`.
int modal_answer_index(const std::vector<CandidateRecord>& candidates,
                       const std::vector<int>& indices) {
    int best = indices.front();
    int best_count = 0;
    for (int i : indices) {
        int count = 0;
        for (int j : indices) {
            if (answers_equal(*candidates[i].answer, *candidates[j].answer)) ++count;
        }
        if (count > best_count) {
            best_count = count;
            best = i;
        }
    }
    return best;
}

std::string join_history(const std::vector<RefineRecord>& history) {
    std::string out;
    for (const auto& rec : history) {
        if (!out.empty()) out += "\n\n";
        out += "Attempt " + std::to_string(rec.iteration) + ":\n" + rec.output;
        out += "\n\nFeedback " + std::to_string(rec.iteration) + ":\n" + rec.feedback;
    }
    return out;
}

} // namespace

void SelfVerificationConfig::validate() const {
    if (num_candidates < 2) {
        throw ValidationError("self-verification needs K >= 2 candidates");
    }
    if (verification_rounds < 1) throw ValidationError("verification_rounds must be >= 1");
    if (gen_tokens < 1 || verify_tokens < 1 || rewrite_tokens < 1) {
        throw ValidationError("token budgets must be >= 1");
    }
}

void SelfRefineConfig::validate() const {
    if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (tokens < 1) throw ValidationError("token budget must be >= 1");
}

std::vector<Condition> extract_conditions(const std::string& problem) {
    static const std::regex re(R"(\d+(?:,\d{3})*(?:\.\d+)?)");
    std::vector<Condition> out;
    auto begin = std::sregex_iterator(problem.begin(), problem.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        Condition c;
        c.value = it->str();
        c.begin = static_cast<size_t>(it->position());
        c.end = c.begin + it->length();
        out.push_back(std::move(c));
    }
    if (out.empty()) throw NoConditions("problem contains no numeric conditions");
    return out;
}

std::string mask_condition(const std::string& problem, size_t index,
                           const std::string& conclusion) {
    const auto conditions = extract_conditions(problem);
    if (index >= conditions.size()) {
        throw std::out_of_range("condition index " + std::to_string(index) + " out of range (" +
                                std::to_string(conditions.size()) + " conditions)");
    }
    const Condition& c = conditions[index];
    return problem.substr(0, c.begin) + "X" + problem.substr(c.end) + " " + conclusion;
}

std::string rewrite_as_statement(const std::string& problem, double answer, Backend& backend,
                                 int max_tokens, double temperature) {
    RenderContext ctx;
    ctx.problem = problem;
    ctx.candidate_answer = format_number(answer);
    const std::string prompt = render(PromptKind::SVRewrite, ctx, catalog());
    const auto resp = backend.complete({prompt, max_tokens, temperature});
    const std::string statement = trim(resp.text);
    if (statement.empty()) throw RewriteError("rewrite produced empty output");
    return statement;
}

std::optional<double> parse_backward_reconstruction(const std::string& output) {
    static const std::regex re(R"(X\s*=\s*([^\n]+))", std::regex::icase);
    std::optional<std::string> last;
    auto begin = std::sregex_iterator(output.begin(), output.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        last = (*it)[1].str();
    }
    if (!last) return std::nullopt;
    try {
        return normalize_answer(*last);
    } catch (const NotANumber&) {
        return std::nullopt;
    }
}

CandidateRecord score_candidate(const std::string& problem, const CandidateDraft& candidate,
                                const std::vector<Condition>& conditions,
                                const SelfVerificationConfig& config, Backend& backend) {
    CandidateRecord rec;
    rec.answer = candidate.answer;
    rec.solution_text = candidate.solution_text;
    rec.conclusion = candidate.conclusion;
    for (int round = 0; round < config.verification_rounds; ++round) {
        for (size_t i = 0; i < conditions.size(); ++i) {
            RenderContext ctx;
            ctx.problem = mask_condition(problem, i, candidate.conclusion);
            const std::string prompt = render(PromptKind::SVBackward, ctx, catalog());
            const auto resp = backend.complete(
                {prompt, config.verify_tokens, config.verify_temperature});

            Reconstruction recon;
            recon.condition = conditions[i].value;
            recon.reconstructed = parse_backward_reconstruction(resp.text);
            recon.matched = recon.reconstructed &&
                            answers_equal(*recon.reconstructed,
                                          normalize_answer(conditions[i].value));
            if (recon.matched) ++rec.verification_score;
            rec.reconstructions.push_back(std::move(recon));
        }
    }
    return rec;
}

int select_candidate(const std::vector<CandidateRecord>& candidates) {
    std::vector<int> eligible;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].answer) eligible.push_back(static_cast<int>(i));
    }
    if (eligible.empty()) throw NoAnswer("no candidate produced a parseable answer");

    int max_score = -1;
    for (int i : eligible) max_score = std::max(max_score, candidates[i].verification_score);
    std::vector<int> tied;
    for (int i : eligible) {
        if (candidates[i].verification_score == max_score) tied.push_back(i);
    }
    if (tied.size() == 1) return tied.front();
    return modal_answer_index(candidates, tied);
}

SelfVerificationOutcome run_self_verification(const Task& task,
                                              const SelfVerificationConfig& config,
                                              Backend& backend) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    RenderContext gen_ctx;
    gen_ctx.problem = task.question;
    const std::string gen_prompt = render(PromptKind::SRGenerate, gen_ctx, catalog());

    std::vector<CandidateDraft> drafts;
    for (int k = 0; k < config.num_candidates; ++k) {
        const auto resp = backend.complete(
            {gen_prompt, config.gen_tokens, config.gen_temperature});
        drafts.push_back({lenient_answer(resp.text), resp.text, ""});
    }

    SelfVerificationOutcome outcome;
    bool verified = true;
    std::vector<Condition> conditions;
    try {
        conditions = extract_conditions(task.question);
    } catch (const NoConditions&) {
        verified = false; // nothing to mask; fall back to a plain majority vote
    }

    for (auto& draft : drafts) {
        if (!verified || !draft.answer) {
            CandidateRecord rec;
            rec.answer = draft.answer;
            rec.solution_text = draft.solution_text;
            outcome.candidates.push_back(std::move(rec));
            continue;
        }
        try {
            draft.conclusion = rewrite_as_statement(task.question, *draft.answer, backend,
                                                    config.rewrite_tokens,
                                                    config.verify_temperature);
        } catch (const RewriteError&) {
            CandidateRecord rec;
            rec.answer = draft.answer;
            rec.solution_text = draft.solution_text;
            outcome.candidates.push_back(std::move(rec));
            continue;
        }
        outcome.candidates.push_back(
            score_candidate(task.question, draft, conditions, config, backend));
    }

    if (verified) {
        outcome.chosen_candidate = select_candidate(outcome.candidates);
    } else {
        std::vector<int> eligible;
        for (size_t i = 0; i < outcome.candidates.size(); ++i) {
            if (outcome.candidates[i].answer) eligible.push_back(static_cast<int>(i));
        }
        if (eligible.empty()) throw NoAnswer("no candidate produced a parseable answer");
        outcome.chosen_candidate = modal_answer_index(outcome.candidates, eligible);
    }
    outcome.final_answer = *outcome.candidates[outcome.chosen_candidate].answer;
    outcome.attempts = 1; // one candidate-generation round per run
    outcome.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

bool is_positive_feedback(const std::string& feedback) {
    static const std::regex re(R"(VERDICT\s*:\s*([A-Za-z]+))", std::regex::icase);
    std::optional<std::string> last;
    auto begin = std::sregex_iterator(feedback.begin(), feedback.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        last = (*it)[1].str();
    }
    if (!last) return false; // no sentinel: keep refining
    std::string verdict = *last;
    std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return verdict == "CORRECT";
}

SelfRefineOutcome run_self_refine(const Task& task, const SelfRefineConfig& config,
                                  Backend& backend) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    RenderContext ctx;
    ctx.problem = task.question;
    std::string output =
        backend.complete({render(PromptKind::SRGenerate, ctx, catalog()),
                          config.tokens, config.temperature})
            .text;

    std::vector<RefineRecord> history;
    for (int t = 0;; ++t) {
        ctx.solution = output;
        const std::string feedback =
            backend.complete({render(PromptKind::SRFeedback, ctx, catalog()),
                              config.tokens, config.temperature})
                .text;
        const bool positive = is_positive_feedback(feedback);
        history.push_back({t, output, feedback, positive});
        if (positive || t + 1 >= config.max_iterations) break;

        // Refine over the full history x || y0 || fb0 || ... || y_t || fb_t.
        ctx.history = join_history(history);
        output = backend.complete({render(PromptKind::SRRefine, ctx, catalog()),
                                   config.tokens, config.temperature})
                     .text;
    }

    const auto answer = lenient_answer(history.back().output);
    if (!answer) {
        throw SelfRefineNoAnswer("final refine output has no parseable answer",
                                 std::move(history));
    }
    SelfRefineOutcome outcome;
    outcome.final_answer = *answer;
    outcome.attempts = static_cast<int>(history.size());
    outcome.history = std::move(history);
    outcome.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

} // namespace mgv
