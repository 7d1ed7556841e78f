// Decision-state machine: paradigm initialization, action legality, the
// callable-set evolution rules, and episode recording.

#include <catch2/catch_amalgamated.hpp>

#include <skilltree/engine.hpp>
#include <skilltree/policy.hpp>
#include <skilltree/runner.hpp>

#include "support.hpp"

using namespace skilltree;
using Catch::Matchers::ContainsSubstring;
using testsupport::data_path;

namespace {

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

struct Setup {
    SkillTree tree = load_manifest(data_path("reference_tree.json"));
    QuestionFixture fixture = load_fixture(data_path("fixtures/case_f1.json"));
};

}  // namespace

TEST_CASE("initial context per paradigm") {
    Setup s;
    SECTION("active shows only the kit table and nothing is callable") {
        DecisionState st = init_state(s.fixture, s.tree, Paradigm::active());
        REQUIRE(st.callable.empty());
        std::size_t entries = 0;
        for (std::size_t pos = st.o0.find("\"kit\":"); pos != std::string::npos;
             pos = st.o0.find("\"kit\":", pos + 1))
            ++entries;
        REQUIRE(entries == 5);
        REQUIRE(st.o0.find("Parameters:") == std::string::npos);
    }
    SECTION("flat registers every tool up front") {
        DecisionState st = init_state(s.fixture, s.tree, Paradigm::flat());
        REQUIRE(st.callable.size() == 104);
        REQUIRE_THAT(st.o0, ContainsSubstring("## inversion.ATI"));
        REQUIRE_THAT(st.o0, ContainsSubstring("## statistics.get_filelist"));
    }
    SECTION("rag needs a retrieval result and fixes the callable set") {
        REQUIRE_THROWS_AS(init_state(s.fixture, s.tree, Paradigm::rag()), ConfigError);
        std::vector<std::string> retrieved = {"ATI", "mean", "get_filelist"};
        DecisionState st = init_state(s.fixture, s.tree, Paradigm::rag(), retrieved);
        REQUIRE(st.callable.size() == 3);
        REQUIRE(st.callable.count("inversion.ATI") == 1);
        REQUIRE_THROWS_WITH(
            init_state(s.fixture, s.tree, Paradigm::rag(),
                       std::vector<std::string>{"no_such_tool"}),
            ContainsSubstring("not in library"));
    }
    SECTION("two-layer variant pre-exposes every brief but no document") {
        DecisionState st = init_state(s.fixture, s.tree, Paradigm::two_layers());
        REQUIRE(st.callable.empty());
        for (const auto& n : s.tree.nodes)
            REQUIRE_THAT(st.o0, ContainsSubstring("### kit: " + n.kit_id));
        for (const auto& t : s.tree.tools)
            REQUIRE_THAT(st.o0, ContainsSubstring("- " + t.tool_id() + ":"));
        REQUIRE(st.o0.find("Parameters:") == std::string::npos);
    }
}

TEST_CASE("exploration grows the callable set monotonically") {
    Setup s;
    Environment env(s.fixture);
    DecisionState st = init_state(s.fixture, s.tree, Paradigm::active());

    Observation cat = step(st, Action::explore_skill("inversion"), env, s.tree);
    REQUIRE(cat.kind == ObservationKind::InfoCatalog);
    REQUIRE(count_lines(cat.payload) == 17);
    REQUIRE(st.callable.empty());  // catalogs never grant callability

    Observation doc = step(st, Action::explore_doc("inversion.ATI"), env, s.tree);
    REQUIRE(doc.kind == ObservationKind::InfoDoc);
    REQUIRE(st.callable == std::set<std::string>{"inversion.ATI"});
    REQUIRE(st.warnings.empty());  // skill came first, no ordering warning

    Observation again = step(st, Action::explore_doc("inversion.ATI"), env, s.tree);
    REQUIRE(again.kind == ObservationKind::InfoDoc);
    REQUIRE(st.callable.size() == 1);
}

TEST_CASE("call is rejected until the document is disclosed") {
    Setup s;
    Environment env(s.fixture);
    DecisionState st = init_state(s.fixture, s.tree, Paradigm::active());

    json args{{"albedo_path", "/x/albedo.tif"}, {"bt_path", "/x/bt.tif"}};
    Observation rejected = step(st, Action::call("inversion.ATI", args), env, s.tree);
    REQUIRE(rejected.kind == ObservationKind::Error);
    REQUIRE_THAT(rejected.payload, ContainsSubstring("tool not callable"));
    REQUIRE(st.calls.empty());  // legality rejections never reach the executor

    step(st, Action::explore_doc("inversion.ATI"), env, s.tree);
    Observation ok = step(st, Action::call("inversion.ATI", args), env, s.tree);
    REQUIRE(ok.kind == ObservationKind::Exec);
    REQUIRE(st.calls.size() == 1);
    REQUIRE(st.calls[0].tool == "inversion.ATI");
}

TEST_CASE("paradigm action spaces are enforced") {
    Setup s;
    Environment env(s.fixture);

    DecisionState flat = init_state(s.fixture, s.tree, Paradigm::flat());
    Observation o1 = step(flat, Action::explore_skill("index"), env, s.tree);
    REQUIRE(o1.kind == ObservationKind::Error);
    REQUIRE_THAT(o1.payload, ContainsSubstring("not in paradigm action space"));
    Observation o2 = step(flat, Action::explore_doc("index.NDVI"), env, s.tree);
    REQUIRE(o2.kind == ObservationKind::Error);

    DecisionState two = init_state(s.fixture, s.tree, Paradigm::two_layers());
    Observation o3 = step(two, Action::explore_skill("index"), env, s.tree);
    REQUIRE(o3.kind == ObservationKind::Error);
    Observation o4 = step(two, Action::explore_doc("inversion.ATI"), env, s.tree);
    REQUIRE(o4.kind == ObservationKind::InfoDoc);

    DecisionState rag =
        init_state(s.fixture, s.tree, Paradigm::rag(), std::vector<std::string>{"mean"});
    Observation o5 = step(rag, Action::explore_doc("inversion.ATI"), env, s.tree);
    REQUIRE(o5.kind == ObservationKind::Error);
    REQUIRE(rag.callable == std::set<std::string>{"statistics.mean"});
}

TEST_CASE("filelist is a meta-tool in every paradigm") {
    Setup s;
    for (Paradigm p : {Paradigm::active(), Paradigm::flat(), Paradigm::two_layers()}) {
        Environment env(s.fixture);
        DecisionState st = init_state(s.fixture, s.tree, p);
        Observation obs =
            step(st, Action::filelist("/workspace/benchmark/data/question42"), env, s.tree);
        REQUIRE(obs.kind == ObservationKind::Exec);
        REQUIRE_THAT(obs.payload, ContainsSubstring("2023_05_01_albedo.tif"));
        REQUIRE(st.calls.size() == 1);
        REQUIRE(st.calls[0].tool == "get_filelist");
    }
}

TEST_CASE("bad targets come back as error observations") {
    Setup s;
    Environment env(s.fixture);
    DecisionState st = init_state(s.fixture, s.tree, Paradigm::active());

    REQUIRE_THAT(step(st, Action::explore_skill("nope"), env, s.tree).payload,
                 ContainsSubstring("unknown kit"));
    REQUIRE_THAT(step(st, Action::explore_doc("index.nope"), env, s.tree).payload,
                 ContainsSubstring("unknown tool"));
    REQUIRE_THAT(step(st, Action::explore_doc("ATI"), env, s.tree).payload,
                 ContainsSubstring("malformed"));
    step(st, Action::explore_doc("inversion.ATI"), env, s.tree);
    Observation bad_arg =
        step(st, Action::call("inversion.ATI", json{{"wrong_key", 1}}), env, s.tree);
    REQUIRE(bad_arg.kind == ObservationKind::Error);
    REQUIRE_THAT(bad_arg.payload, ContainsSubstring("unknown parameter"));
    // The episode keeps going after any number of error observations.
    REQUIRE_FALSE(st.terminated);
}

TEST_CASE("doc before skill is tolerated with a recorded warning") {
    Setup s;
    Environment env(s.fixture);
    DecisionState st = init_state(s.fixture, s.tree, Paradigm::active());
    Observation obs = step(st, Action::explore_doc("inversion.ATI"), env, s.tree);
    REQUIRE(obs.kind == ObservationKind::InfoDoc);
    REQUIRE(st.callable.count("inversion.ATI") == 1);
    REQUIRE(st.warnings.size() == 1);
    REQUIRE_THAT(st.warnings[0], ContainsSubstring("before skill"));
}

TEST_CASE("answer terminates and later steps throw") {
    Setup s;
    Environment env(s.fixture);
    DecisionState st = init_state(s.fixture, s.tree, Paradigm::active());
    Observation fin = step(st, Action::answer("D"), env, s.tree);
    REQUIRE(fin.kind == ObservationKind::Final);
    REQUIRE(st.terminated);
    REQUIRE(st.answer == "D");
    REQUIRE_THROWS_AS(step(st, Action::answer("D"), env, s.tree), std::logic_error);
}

TEST_CASE("episode loop records turns, calls, and the turn budget") {
    Setup s;
    SECTION("a lone answer makes a one-turn record") {
        ScriptedPolicy policy({Action::answer("A")});
        EpisodeConfig cfg;
        TrajectoryRecord rec = run_episode(s.fixture, s.tree, policy, cfg);
        REQUIRE(rec.turns.size() == 1);
        REQUIRE(rec.terminated);
        REQUIRE(rec.answer == "A");
        REQUIRE(rec.calls.empty());
        REQUIRE_FALSE(rec.error.has_value());
    }
    SECTION("a policy that never answers stops at max_turns") {
        std::vector<Action> spin(5, Action::explore_skill("index"));
        spin.push_back(Action::explore_skill("index"));  // never reached
        ScriptedPolicy policy(spin);
        EpisodeConfig cfg;
        cfg.limits.max_turns = 5;
        TrajectoryRecord rec = run_episode(s.fixture, s.tree, policy, cfg);
        REQUIRE(rec.turns.size() == 5);
        REQUIRE_FALSE(rec.terminated);
        REQUIRE_FALSE(rec.answer.has_value());
    }
    SECTION("policy failure keeps the partial trajectory") {
        ScriptedPolicy policy({Action::explore_skill("index")});  // exhausted on turn 2
        EpisodeConfig cfg;
        TrajectoryRecord rec = run_episode(s.fixture, s.tree, policy, cfg);
        REQUIRE(rec.turns.size() == 1);
        REQUIRE(rec.error.has_value());
        REQUIRE_THAT(*rec.error, ContainsSubstring("exhausted"));
    }
}

TEST_CASE("oracle replay is deterministic byte for byte") {
    Setup s;
    auto one = testsupport::run_oracle(s.fixture, s.tree, Paradigm::active());
    auto two = testsupport::run_oracle(s.fixture, s.tree, Paradigm::active());
    REQUIRE(one.to_json().dump() == two.to_json().dump());
    REQUIRE(one.terminated);
    REQUIRE(one.answer == "D");
}

TEST_CASE("trajectory records round-trip through json") {
    Setup s;
    auto rec = testsupport::run_oracle(s.fixture, s.tree, Paradigm::active());
    json j = rec.to_json();
    REQUIRE(j["turn_count"] == rec.turns.size());
    TrajectoryRecord back = TrajectoryRecord::from_json(j);
    REQUIRE(back.to_json().dump() == j.dump());
}

TEST_CASE("actions round-trip and reject unknown names") {
    json call = Action::call("statistics.mean", json{{"values", json::array({1, 2})}})
                    .to_json();
    Action parsed = Action::from_json(call);
    REQUIRE(parsed.kind == ActionKind::Call);
    REQUIRE(parsed.tool_id == "statistics.mean");
    REQUIRE_THROWS_AS(Action::from_json(json{{"name", "launch"}}), ParseError);

    REQUIRE(std::string(to_string(ObservationKind::InfoCatalog)) == "info_catalog");
    REQUIRE(observation_kind_from_string("exec") == ObservationKind::Exec);
    REQUIRE_THROWS_AS(observation_kind_from_string("bogus"), ParseError);
}
