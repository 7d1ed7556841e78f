// Answer extraction, the six trajectory metrics, token accounting, and
// report aggregation.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <skilltree/metrics.hpp>

#include "support.hpp"

using namespace skilltree;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using testsupport::data_path;

namespace {

using Names = std::vector<std::string>;

TrajectoryRecord record_with(const std::string& id, const std::vector<CallRecord>& calls,
                             const std::string& answer,
                             const std::vector<std::int64_t>& turn_tokens = {}) {
    TrajectoryRecord r;
    r.question_id = id;
    r.paradigm = "active";
    r.calls = calls;
    r.answer = answer;
    r.terminated = true;
    for (std::int64_t t : turn_tokens)
        r.turns.push_back({json::object(), ObservationKind::Exec, 0, t});
    return r;
}

QuestionFixture fixture_with(const std::string& id, const std::vector<GtCall>& gt,
                             const std::string& answer) {
    QuestionFixture q;
    q.question_id = id;
    q.query = "?";
    q.gt_answer = answer;
    q.gt_trajectory = gt;
    return q;
}

}  // namespace

TEST_CASE("answer tags: last complete pair wins, both closers accepted") {
    REQUIRE(extract_answer("<Answer>D<Answer>") == "D");
    REQUIRE(extract_answer("I think A. <Answer>B</Answer>") == "B");
    REQUIRE(extract_answer("no tags here").empty());
    REQUIRE(extract_answer("<Answer>A</Answer> wait <Answer>C<Answer>") == "C");
    REQUIRE(extract_answer("<Answer> D \n<Answer>") == "D");  // trimmed
    REQUIRE(extract_answer("<Answer>dangling").empty());      // no closer

    REQUIRE(answer_matches("<Answer>d<Answer>", "D"));  // case-insensitive
    REQUIRE(answer_matches("  b ", "B"));               // bare text fallback
    REQUIRE_FALSE(answer_matches("", "A"));
}

TEST_CASE("tool_any_order collapses duplicates") {
    REQUIRE(tool_any_order(Names{"C", "A"}, Names{"A", "C"}) == 1.0);
    REQUIRE(tool_any_order(Names{"A", "A", "B"}, Names{"A", "C"}) == 0.5);
    REQUIRE(tool_any_order(Names{}, Names{"A"}) == 0.0);
    REQUIRE(tool_any_order(Names{}, Names{}) == 1.0);  // vacuous
}

TEST_CASE("tool_in_order scores the best order-preserving matching") {
    REQUIRE(tool_in_order(Names{"A", "B", "C"}, Names{"A", "C"}) == 1.0);
    REQUIRE(tool_in_order(Names{"C", "A"}, Names{"A", "C"}) == 0.5);
    REQUIRE(tool_in_order(Names{"A", "C", "A", "C"}, Names{"A", "A", "C"}) == 1.0);
    // A greedy earliest-occurrence scan would find only 1 match here; the
    // maximum order-preserving matching finds [A, C].
    REQUIRE_THAT(tool_in_order(Names{"A", "C"}, Names{"C", "A", "C"}),
                 WithinAbs(2.0 / 3.0, 1e-12));
}

TEST_CASE("tool_in_order equals the brute-force reference on small pairs") {
    const Names alphabet = {"A", "B", "C"};
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3000; ++trial) {
        auto make = [&](std::size_t max_len) {
            Names s(rng() % (max_len + 1));
            for (auto& x : s) x = alphabet[rng() % alphabet.size()];
            return s;
        };
        Names pred = make(6), gt = make(6);
        int expected = testsupport::brute_force_matches(pred, gt);
        REQUIRE(max_order_preserving_matches(pred, gt) == expected);
    }
}

TEST_CASE("tool_exact_match stops at the first mismatch") {
    REQUIRE_THAT(tool_exact_match(Names{"A", "B", "C"}, Names{"A", "B", "D"}),
                 WithinAbs(2.0 / 3.0, 1e-12));
    REQUIRE(tool_exact_match(Names{"A", "B"}, Names{"A", "B"}) == 1.0);
    REQUIRE(tool_exact_match(Names{"B", "A"}, Names{"A", "B"}) == 0.0);

    // Denominator choice only matters when pred is shorter than gt.
    REQUIRE(tool_exact_match(Names{"A"}, Names{"A", "B"},
                             ExactMatchDenominator::Gt) == 0.5);
    REQUIRE(tool_exact_match(Names{"A"}, Names{"A", "B"},
                             ExactMatchDenominator::MinLen) == 1.0);
}

TEST_CASE("parameters_match compares canonical arguments stepwise") {
    std::vector<CallRecord> pred = {{"inversion.ATI", json{{"bt_path", "b"},
                                                           {"albedo_path", "a"}}}};
    std::vector<GtCall> gt = {{"ATI", json{{"albedo_path", "a"}, {"bt_path", "b"}}}};
    REQUIRE(parameters_match(pred, gt) == 1.0);  // key order is canonicalized away

    std::vector<CallRecord> wrong = {{"ATI", json{{"albedo_path", "a"},
                                                  {"bt_path", "DIFFERENT"}}}};
    REQUIRE(parameters_match(wrong, gt) == 0.0);

    std::vector<CallRecord> pred3 = {{"X", json{{"k", 1}}},
                                     {"Y", json{{"k", 2}}},
                                     {"Z", json{{"k", 99}}}};
    std::vector<GtCall> gt3 = {{"X", json{{"k", 1}}},
                               {"Y", json{{"k", 2}}},
                               {"Z", json{{"k", 3}}}};
    REQUIRE_THAT(parameters_match(pred3, gt3), WithinAbs(2.0 / 3.0, 1e-12));
}

TEST_CASE("metric ordering chain holds for duplicate-free ground truth") {
    const Names alphabet = {"A", "B", "C", "D", "E"};
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        Names pred(rng() % 7);
        for (auto& x : pred) x = alphabet[rng() % alphabet.size()];
        Names pool = alphabet;
        std::shuffle(pool.begin(), pool.end(), rng);
        Names gt(pool.begin(), pool.begin() + 1 + rng() % (pool.size() - 1));
        double tem = tool_exact_match(pred, gt);
        double tio = tool_in_order(pred, gt);
        double tao = tool_any_order(pred, gt);
        REQUIRE(tem <= tio + 1e-12);
        REQUIRE(tio <= tao + 1e-12);
    }
}

TEST_CASE("token counting approximates four bytes per token") {
    REQUIRE(builtin_token_count("abcd efgh") == 3);  // ceil(9/4)
    REQUIRE(builtin_token_count("") == 0);
    REQUIRE(builtin_token_count("abcd") == 1);
    REQUIRE(builtin_token_count("abcde") == 2);
}

TEST_CASE("compression arithmetic matches the published table") {
    double per_question = compression_ratio(502119, 70759);
    REQUIRE(per_question >= 0.858);
    REQUIRE(per_question <= 0.861);
    double per_turn = compression_ratio(30612, 5951);
    REQUIRE(per_turn >= 0.805);
    REQUIRE(per_turn <= 0.807);
    REQUIRE(compression_ratio(100, 100) == 0.0);
    REQUIRE_THROWS_AS(compression_ratio(0, 10), ConfigError);
}

TEST_CASE("scoring one question ties all the pieces together") {
    auto fixture = fixture_with(
        "q1", {{"get_filelist", json{{"path", "/ws"}}}, {"mean", json{{"values", 1}}}},
        "A");
    auto record = record_with("q1",
                              {{"get_filelist", json{{"path", "/ws"}}},
                               {"statistics.mean", json{{"values", 1}}},
                               {"statistics.mean", json{{"values", 2}}}},
                              "<Answer>a<Answer>", {10, 20, 30});
    QuestionScore s = score_question(record, fixture);
    REQUIRE(s.accuracy == 1.0);
    REQUIRE_THAT(*s.efficiency, WithinAbs(1.5, 1e-12));  // 3 executed vs 2 GT
    REQUIRE(s.tao == 1.0);
    REQUIRE(s.tio == 1.0);
    REQUIRE(s.tem == 1.0);
    REQUIRE(s.params == 1.0);  // prefix of 2 matches, third call is beyond gt
    REQUIRE(s.tokens_q == 60);
    REQUIRE(s.turns == 3);
}

TEST_CASE("empty ground truth is vacuous and flagged") {
    auto fixture = fixture_with("q0", {}, "C");
    auto record = record_with("q0", {{"statistics.mean", json::object()}}, "C", {8});
    QuestionScore s = score_question(record, fixture);
    REQUIRE(s.gt_empty);
    REQUIRE_FALSE(s.efficiency.has_value());
    REQUIRE(s.tao == 1.0);
    REQUIRE(s.tio == 1.0);
    REQUIRE(s.tem == 1.0);
    REQUIRE(s.params == 1.0);
}

TEST_CASE("aggregation averages per question and weights turns globally") {
    auto f1 = fixture_with("a", {{"mean", json::object()}}, "A");
    auto f2 = fixture_with("b", {{"mean", json::object()}}, "B");
    auto r1 = record_with("a", {{"mean", json::object()}}, "A", {10, 20, 30});
    auto r2 = record_with("b", {{"mean", json::object()}}, "WRONG", {40});

    RunReport rep = aggregate({score_question(r1, f1), score_question(r2, f2)});
    REQUIRE(rep.mean_accuracy == 0.5);
    REQUIRE(rep.rows.size() == 2);
    REQUIRE(rep.rows[0].question_id == "a");
    REQUIRE(rep.mean_tokens_per_question == 50.0);   // (60 + 40) / 2
    REQUIRE(rep.tokens_per_turn == 25.0);            // 100 tokens over 4 turns
    REQUIRE(rep.total_tokens == 100);
    REQUIRE(rep.total_turns == 4);

    // Permutation invariance.
    RunReport swapped = aggregate({score_question(r2, f2), score_question(r1, f1)});
    REQUIRE(report_to_json(rep).dump() == report_to_json(swapped).dump());

    // Single question [10,20,30]: per-question 60, per-turn 20.
    RunReport solo = aggregate({score_question(r1, f1)});
    REQUIRE(solo.mean_tokens_per_question == 60.0);
    REQUIRE(solo.tokens_per_turn == 20.0);
}

TEST_CASE("reports serialize with the fixed csv schema") {
    auto f = fixture_with("q", {}, "A");
    auto r = record_with("q", {}, "A", {4});
    RunReport rep = aggregate({score_question(r, f)});
    std::string csv = report_to_csv(rep);
    REQUIRE_THAT(csv, ContainsSubstring(
                          "question_id,accuracy,efficiency,tao,tio,tem,params,"
                          "tokens_q,turns,tokens_turn_mean\n"));
    REQUIRE_THAT(csv, ContainsSubstring("q,1.000000,,"));  // empty efficiency cell

    json j = report_to_json(rep);
    REQUIRE(j.contains("questions"));
    REQUIRE(j.contains("means"));
    REQUIRE(j.contains("totals"));
    REQUIRE(j["questions"][0]["gt_empty"] == true);
}

TEST_CASE("oracle replay of a bundled case scores perfectly") {
    SkillTree tree = load_manifest(data_path("reference_tree.json"));
    QuestionFixture f2 = load_fixture(data_path("fixtures/case_f2.json"));
    auto record = testsupport::run_oracle(f2, tree, Paradigm::active());
    QuestionScore s = score_question(record, f2);
    REQUIRE(s.accuracy == 1.0);
    REQUIRE(*s.efficiency == 1.0);
    REQUIRE(s.tao == 1.0);
    REQUIRE(s.tio == 1.0);
    REQUIRE(s.tem == 1.0);
    REQUIRE(s.params == 1.0);
}
