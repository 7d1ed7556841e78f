#pragma once

// Trajectory evaluation: answer accuracy, call-count efficiency, three
// step-level tool-sequence metrics, stepwise parameter agreement, token
// accounting, and context-compression. Scores derive purely from a trajectory
// record plus its fixture, so re-scoring a saved record reproduces run-time
// results exactly.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skilltree/engine.hpp"
#include "skilltree/environment.hpp"
#include "skilltree/errors.hpp"
#include "skilltree/tokens.hpp"

namespace skilltree {

// ---------------------------------------------------------------- answers

inline std::string trim_copy(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string lower_copy(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Extracts the choice inside <Answer>X<Answer> or <Answer>X</Answer>; the last
// complete tag pair wins. Returns "" when no tag is present.
inline std::string extract_answer(std::string_view text) {
    constexpr std::string_view open = "<Answer>";
    constexpr std::string_view close = "</Answer>";
    std::string found;
    for (std::size_t pos = text.find(open); pos != std::string_view::npos;
         pos = text.find(open, pos + 1)) {
        std::size_t inner = pos + open.size();
        std::size_t a = text.find(open, inner);
        std::size_t b = text.find(close, inner);
        std::size_t end = std::min(a, b);
        if (end == std::string_view::npos) continue;
        found = trim_copy(text.substr(inner, end - inner));
    }
    return found;
}

// Tagged answers are unwrapped first; comparison is case-insensitive.
inline bool answer_matches(std::string_view answer_text, std::string_view gt) {
    std::string got = extract_answer(answer_text);
    if (got.empty()) got = trim_copy(answer_text);
    return !got.empty() && lower_copy(got) == lower_copy(trim_copy(gt));
}

// ---------------------------------------------------------------- sequences

// Maximum order-preserving matching between pred and gt: the largest number of
// gt entries that can be paired with equal pred entries at strictly increasing
// positions on both sides.
inline int max_order_preserving_matches(const std::vector<std::string>& pred,
                                        const std::vector<std::string>& gt) {
    const std::size_t n = pred.size(), m = gt.size();
    if (n == 0 || m == 0) return 0;
    std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            cur[j] = std::max(prev[j], cur[j - 1]);
            if (pred[i - 1] == gt[j - 1]) cur[j] = std::max(cur[j], prev[j - 1] + 1);
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// |gt| = 0 makes every step metric vacuously perfect; callers flag it.
inline double tool_any_order(const std::vector<std::string>& pred,
                             const std::vector<std::string>& gt) {
    std::set<std::string> gset(gt.begin(), gt.end());
    if (gset.empty()) return 1.0;
    std::set<std::string> pset(pred.begin(), pred.end());
    int hit = 0;
    for (const auto& g : gset)
        if (pset.count(g)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(gset.size());
}

inline double tool_in_order(const std::vector<std::string>& pred,
                            const std::vector<std::string>& gt) {
    if (gt.empty()) return 1.0;
    return static_cast<double>(max_order_preserving_matches(pred, gt)) /
           static_cast<double>(gt.size());
}

enum class ExactMatchDenominator { Gt, MinLen };

inline double tool_exact_match(const std::vector<std::string>& pred,
                               const std::vector<std::string>& gt,
                               ExactMatchDenominator denom = ExactMatchDenominator::Gt) {
    if (gt.empty()) return 1.0;
    std::size_t agree = 0;
    while (agree < pred.size() && agree < gt.size() && pred[agree] == gt[agree]) ++agree;
    std::size_t d = denom == ExactMatchDenominator::Gt
                        ? gt.size()
                        : std::max<std::size_t>(1, std::min(pred.size(), gt.size()));
    return static_cast<double>(agree) / static_cast<double>(d);
}

inline std::string unqualified_name(std::string_view tool) {
    auto dot = tool.find('.');
    return std::string(dot == std::string_view::npos ? tool : tool.substr(dot + 1));
}

inline std::vector<std::string> call_names(const std::vector<CallRecord>& calls) {
    std::vector<std::string> out;
    out.reserve(calls.size());
    for (const auto& c : calls) out.push_back(unqualified_name(c.tool));
    return out;
}

inline std::vector<std::string> gt_names(const std::vector<GtCall>& gt) {
    std::vector<std::string> out;
    out.reserve(gt.size());
    for (const auto& c : gt) out.push_back(unqualified_name(c.tool));
    return out;
}

// Stepwise (tool, canonical args) agreement over the aligned prefix.
inline double parameters_match(const std::vector<CallRecord>& pred,
                               const std::vector<GtCall>& gt,
                               ExactMatchDenominator denom = ExactMatchDenominator::Gt) {
    if (gt.empty()) return 1.0;
    std::size_t agree = 0;
    while (agree < pred.size() && agree < gt.size()) {
        const auto& p = pred[agree];
        const auto& g = gt[agree];
        if (unqualified_name(p.tool) != unqualified_name(g.tool)) break;
        if (canonical_args(p.args) != canonical_args(g.args)) break;
        ++agree;
    }
    std::size_t d = denom == ExactMatchDenominator::Gt
                        ? gt.size()
                        : std::max<std::size_t>(1, std::min(pred.size(), gt.size()));
    return static_cast<double>(agree) / static_cast<double>(d);
}

// ---------------------------------------------------------------- tokens

inline std::int64_t count_tokens(std::string_view text) {
    return builtin_token_count(text);
}

// Fraction of baseline context eliminated by the method (e.g. tokens/question).
inline double compression_ratio(double baseline, double method) {
    if (baseline <= 0.0) throw ConfigError("compression baseline must be positive");
    return 1.0 - method / baseline;
}

// ---------------------------------------------------------------- scoring

struct ScoreOptions {
    ExactMatchDenominator denominator = ExactMatchDenominator::Gt;
};

struct QuestionScore {
    std::string question_id;
    double accuracy = 0.0;
    std::optional<double> efficiency;  // absent when the fixture has no GT calls
    double tao = 0.0, tio = 0.0, tem = 0.0, params = 0.0;
    std::int64_t tokens_q = 0;
    std::int64_t turns = 0;
    bool gt_empty = false;  // step metrics vacuous
};

inline QuestionScore score_question(const TrajectoryRecord& record,
                                    const QuestionFixture& fixture,
                                    const ScoreOptions& opts = {}) {
    QuestionScore s;
    s.question_id = record.question_id;
    s.accuracy = record.answer && answer_matches(*record.answer, fixture.gt_answer) ? 1.0 : 0.0;
    auto pred = call_names(record.calls);
    auto gt = gt_names(fixture.gt_trajectory);
    s.gt_empty = gt.empty();
    if (!gt.empty())
        s.efficiency = static_cast<double>(pred.size()) / static_cast<double>(gt.size());
    s.tao = tool_any_order(pred, gt);
    s.tio = tool_in_order(pred, gt);
    s.tem = tool_exact_match(pred, gt, opts.denominator);
    s.params = parameters_match(record.calls, fixture.gt_trajectory, opts.denominator);
    for (const auto& t : record.turns) s.tokens_q += t.input_tokens;
    s.turns = static_cast<std::int64_t>(record.turns.size());
    return s;
}

struct RunReport {
    std::vector<QuestionScore> rows;  // sorted by question_id
    double mean_accuracy = 0.0;
    std::optional<double> mean_efficiency;
    double mean_tao = 0.0, mean_tio = 0.0, mean_tem = 0.0, mean_params = 0.0;
    double mean_tokens_per_question = 0.0;
    double tokens_per_turn = 0.0;  // turn-weighted over the whole run
    std::int64_t total_tokens = 0;
    std::int64_t total_turns = 0;
};

// Sorting by question id first makes every mean independent of input order.
inline RunReport aggregate(std::vector<QuestionScore> rows) {
    std::sort(rows.begin(), rows.end(), [](const QuestionScore& a, const QuestionScore& b) {
        return a.question_id < b.question_id;
    });
    RunReport r;
    r.rows = std::move(rows);
    if (r.rows.empty()) return r;
    double eff_sum = 0.0;
    std::int64_t eff_n = 0;
    for (const auto& q : r.rows) {
        r.mean_accuracy += q.accuracy;
        r.mean_tao += q.tao;
        r.mean_tio += q.tio;
        r.mean_tem += q.tem;
        r.mean_params += q.params;
        r.mean_tokens_per_question += static_cast<double>(q.tokens_q);
        r.total_tokens += q.tokens_q;
        r.total_turns += q.turns;
        if (q.efficiency) {
            eff_sum += *q.efficiency;
            ++eff_n;
        }
    }
    const double n = static_cast<double>(r.rows.size());
    r.mean_accuracy /= n;
    r.mean_tao /= n;
    r.mean_tio /= n;
    r.mean_tem /= n;
    r.mean_params /= n;
    r.mean_tokens_per_question /= n;
    if (eff_n > 0) r.mean_efficiency = eff_sum / static_cast<double>(eff_n);
    if (r.total_turns > 0)
        r.tokens_per_turn =
            static_cast<double>(r.total_tokens) / static_cast<double>(r.total_turns);
    return r;
}

// ---------------------------------------------------------------- reports

inline std::string format_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline json report_to_json(const RunReport& r) {
    json rows = json::array();
    for (const auto& q : r.rows) {
        json row;
        row["question_id"] = q.question_id;
        row["accuracy"] = q.accuracy;
        row["efficiency"] = q.efficiency ? json(*q.efficiency) : json(nullptr);
        row["tao"] = q.tao;
        row["tio"] = q.tio;
        row["tem"] = q.tem;
        row["params"] = q.params;
        row["tokens_q"] = q.tokens_q;
        row["turns"] = q.turns;
        row["gt_empty"] = q.gt_empty;
        rows.push_back(std::move(row));
    }
    json means;
    means["accuracy"] = r.mean_accuracy;
    means["efficiency"] = r.mean_efficiency ? json(*r.mean_efficiency) : json(nullptr);
    means["tao"] = r.mean_tao;
    means["tio"] = r.mean_tio;
    means["tem"] = r.mean_tem;
    means["params"] = r.mean_params;
    means["tokens_per_question"] = r.mean_tokens_per_question;
    means["tokens_per_turn"] = r.tokens_per_turn;
    json totals;
    totals["tokens"] = r.total_tokens;
    totals["turns"] = r.total_turns;
    totals["questions"] = r.rows.size();
    return json{{"questions", rows}, {"means", means}, {"totals", totals}};
}

inline std::string report_to_csv(const RunReport& r) {
    std::string out =
        "question_id,accuracy,efficiency,tao,tio,tem,params,tokens_q,turns,tokens_turn_mean\n";
    for (const auto& q : r.rows) {
        double turn_mean = q.turns > 0 ? static_cast<double>(q.tokens_q) /
                                             static_cast<double>(q.turns)
                                       : 0.0;
        out += q.question_id;
        out += "," + format_fixed(q.accuracy);
        out += "," + (q.efficiency ? format_fixed(*q.efficiency) : std::string());
        out += "," + format_fixed(q.tao);
        out += "," + format_fixed(q.tio);
        out += "," + format_fixed(q.tem);
        out += "," + format_fixed(q.params);
        out += "," + std::to_string(q.tokens_q);
        out += "," + std::to_string(q.turns);
        out += "," + format_fixed(turn_mean);
        out += "\n";
    }
    return out;
}

}  // namespace skilltree
