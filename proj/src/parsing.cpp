// SPDX-License-Identifier: Apache-2.0
#include "mgv/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <regex>
#include <set>
#include <sstream>

namespace mgv {
namespace {

constexpr size_t kMaxTaskFeatures = 5;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

size_t find_icase(const std::string& haystack, const std::string& needle, size_t from = 0) {
    auto it = std::search(haystack.begin() + static_cast<long>(from), haystack.end(),
                          needle.begin(), needle.end(), [](char a, char b) {
                              return std::tolower(static_cast<unsigned char>(a)) ==
                                     std::tolower(static_cast<unsigned char>(b));
                          });
    return it == haystack.end() ? std::string::npos
                                : static_cast<size_t>(it - haystack.begin());
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

const std::regex& number_pattern() {
    static const std::regex re(R"([-+]?(\d+(\.\d*)?|\.\d+))");
    return re;
}

// Removes "(0-1)" style range hints so their digits are never mistaken for
// a reported difficulty value.
std::string strip_range_hints(const std::string& text) {
    static const std::regex re(R"(\(\s*0\s*-\s*1\s*\))");
    return std::regex_replace(text, re, "");
}

std::string rest_of_line(const std::string& text, size_t from) {
    size_t eol = text.find('\n', from);
    return text.substr(from, eol == std::string::npos ? std::string::npos : eol - from);
}

std::vector<std::string> word_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool has_digit(const std::string& s) {
    return std::any_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Score after `label` on the same line: "Label: 0.9", "label = .5", "LABEL 1".
std::optional<double> labeled_score(const std::string& text, const std::string& label_pattern) {
    std::regex re(label_pattern + R"([^\n0-9+-]*([-+]?(?:\d+(?:\.\d*)?|\.\d+)))",
                  std::regex::icase);
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    return std::stod(m[1].str());
}

} // namespace

std::optional<std::string> extract_tag(const std::string& text, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    size_t begin = find_icase(text, open);
    if (begin == std::string::npos) return std::nullopt;
    begin += open.size();
    size_t end = find_icase(text, close, begin);
    if (end == std::string::npos) return text.substr(begin);
    return text.substr(begin, end - begin);
}

DifficultyAssessment parse_monitor_block(const std::string& output) {
    const std::string region = extract_tag(output, "monitor").value_or(output);

    DifficultyAssessment out;
    size_t label = find_icase(region, "task_features");
    if (label == std::string::npos) label = find_icase(region, "task features");
    if (label == std::string::npos) label = find_icase(region, "task-features");
    if (label != std::string::npos) {
        size_t colon = region.find(':', label);
        if (colon != std::string::npos) {
            std::stringstream ss(rest_of_line(region, colon + 1));
            std::string item;
            while (std::getline(ss, item, ',') && out.task_features.size() < kMaxTaskFeatures) {
                item = trim(item);
                if (!item.empty()) out.task_features.push_back(item);
            }
        }
    }
    if (out.task_features.empty()) out.task_features = {"unspecified"};

    const std::string stripped = strip_range_hints(region);
    if (auto v = labeled_score(stripped, "difficulty")) {
        out.difficulty = clamp01(*v);
        return out;
    }
    // No labeled value; fall back to the first number anywhere in the region.
    std::smatch m;
    if (std::regex_search(stripped, m, number_pattern())) {
        out.difficulty = clamp01(std::stod(m[0].str()));
        return out;
    }
    throw MonitorParseError("no difficulty value found in monitor output");
}

std::string parse_strategy_selection(const std::string& output, const StrategyCatalog& catalog) {
    static const std::string kDefault = "basic arithmetic";
    const std::string fallback = catalog.contains(kDefault) ? kDefault : catalog.strategies.front();

    // Candidate text: everything after the last "Selected Strategy:" label, or
    // the whole output when the label is missing.
    std::string candidate = output;
    const std::string label = "selected strategy:";
    size_t pos = std::string::npos;
    for (size_t at = find_icase(output, label); at != std::string::npos;
         at = find_icase(output, label, at + 1)) {
        pos = at;
    }
    if (pos != std::string::npos) candidate = rest_of_line(output, pos + label.size());
    candidate = trim(candidate);
    // Shed the template's [brackets] and stray punctuation.
    while (!candidate.empty() && (candidate.front() == '[' || candidate.front() == '"')) {
        candidate.erase(candidate.begin());
    }
    while (!candidate.empty()) {
        char c = candidate.back();
        if (c == ']' || c == '"' || c == '.' || c == '!' || c == '?' || c == ',' || c == ';') {
            candidate.pop_back();
        } else {
            break;
        }
    }
    candidate = trim(candidate);
    if (candidate.empty()) return fallback;

    const std::string wanted = lower(candidate);
    for (const auto& s : catalog.strategies) {
        if (lower(s) == wanted) return s;
    }

    // Token overlap, ties to the earlier catalog entry.
    const auto cand_tokens = word_tokens(candidate);
    std::set<std::string> cand_set(cand_tokens.begin(), cand_tokens.end());
    size_t best_overlap = 0;
    const std::string* best = nullptr;
    for (const auto& s : catalog.strategies) {
        size_t overlap = 0;
        for (const auto& tok : word_tokens(s)) {
            if (cand_set.count(tok)) ++overlap;
        }
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = &s;
        }
    }
    return best ? *best : fallback;
}

ParsedSolution parse_solution(const std::string& output) {
    if (!has_digit(output)) {
        throw SolutionParseError("no numeric token in solution output");
    }
    ParsedSolution out;
    out.reasoning = extract_tag(output, "think").value_or("");

    if (auto tagged = extract_tag(output, "answer")) {
        out.answer_raw = trim(*tagged);
    } else {
        // Last whitespace token that carries a digit.
        std::stringstream ss(output);
        std::string tok, last;
        while (ss >> tok) {
            if (has_digit(tok)) last = tok;
        }
        out.answer_raw = last;
    }
    try {
        out.answer_value = normalize_answer(out.answer_raw);
    } catch (const NotANumber&) {
        out.answer_value = std::nullopt;
    }
    return out;
}

EvaluationScores parse_evaluation_block(const std::string& output) {
    const std::string region = extract_tag(output, "evaluate").value_or(output);

    const auto coherence = labeled_score(region, "coherence");
    const auto plausibility = labeled_score(region, "plausibility");
    const auto consistency = labeled_score(region, "consistency");
    const auto goal = labeled_score(region, R"(goal[-_ ]?conduciveness)");
    int found = int(coherence.has_value()) + int(plausibility.has_value()) +
                int(consistency.has_value()) + int(goal.has_value());
    if (found < 4) {
        throw EvaluationParseError("found " + std::to_string(found) +
                                   " of 4 evaluation scores");
    }

    EvaluationScores out;
    out.coherence = clamp01(*coherence);
    out.plausibility = clamp01(*plausibility);
    out.consistency = clamp01(*consistency);
    out.goal_conduciveness = clamp01(*goal);

    // Diagnostic: text after the last "Evaluation:" label (skipping the
    // "evaluation_scores:" header, whose next char is not a colon).
    size_t pos = std::string::npos;
    const std::string label = "evaluation:";
    for (size_t at = find_icase(region, label); at != std::string::npos;
         at = find_icase(region, label, at + 1)) {
        pos = at;
    }
    if (pos != std::string::npos) {
        std::string tail = region.substr(pos + label.size());
        size_t stop = find_icase(tail, "</evaluate>");
        if (stop != std::string::npos) tail = tail.substr(0, stop);
        out.diagnostic = trim(tail);
    }
    return out;
}

double normalize_answer(const std::string& raw) {
    std::string s;
    s.reserve(raw.size());
    for (size_t i = 0; i < raw.size();) {
        // Currency/percent markers and thousands separators are dropped;
        // euro and pound are multi-byte UTF-8.
        if (raw.compare(i, 3, "\xE2\x82\xAC") == 0) { i += 3; continue; }
        if (raw.compare(i, 2, "\xC2\xA3") == 0) { i += 2; continue; }
        char c = raw[i];
        if (c == '$' || c == ',' || c == '%') { ++i; continue; }
        s += c;
        ++i;
    }
    std::smatch m;
    if (!std::regex_search(s, m, number_pattern())) {
        throw NotANumber("cannot parse a number from: " + raw);
    }
    return std::stod(m[0].str());
}

bool answers_equal(double a, double b) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= 1e-6 * scale;
}

std::string format_number(double value) {
    if (std::floor(value) == value && std::fabs(value) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return buf;
}

} // namespace mgv
