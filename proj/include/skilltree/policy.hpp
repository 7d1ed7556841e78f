#pragma once

// Decision policies. The oracle replays a fixture's ground-truth call sequence
// as the minimal legal action stream for the paradigm in force: under
// progressive disclosure it inserts one skill exploration per newly touched
// kit and one doc exploration per not-yet-callable tool; under flat paradigms
// it emits the calls directly. Policies are stateless per decision (the
// scripted policy's cursor is derived from the turn index), so replays are
// deterministic.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "skilltree/engine.hpp"
#include "skilltree/errors.hpp"
#include "skilltree/metrics.hpp"

namespace skilltree {

struct PolicyDecision {
    Action action;
    std::optional<std::int64_t> reported_input_tokens;  // provider-side count
};

struct Policy {
    virtual ~Policy() = default;
    virtual PolicyDecision decide(const DecisionState& state, const QuestionFixture& fixture,
                                  const SkillTree& tree) = 0;
    virtual const char* name() const = 0;
};

// ---------------------------------------------------------------- oracle

// Expands the ground-truth call sequence into the per-paradigm action plan,
// ending with the ground-truth answer.
inline std::vector<Action> oracle_plan(const QuestionFixture& fixture, const Paradigm& paradigm,
                                       const SkillTree& tree) {
    std::vector<Action> plan;
    std::set<std::string> callable, explored;
    const bool progressive = paradigm.kind == ParadigmKind::Active ||
                             paradigm.kind == ParadigmKind::TwoLayers;
    for (const auto& gt : fixture.gt_trajectory) {
        if (gt.tool == "get_filelist") {
            plan.push_back(Action::filelist(gt.args.value("path", "")));
            continue;
        }
        const ToolSpec* t = tree.find_tool(gt.tool);
        if (!t)
            throw ConfigError("ground-truth tool \"" + gt.tool + "\" not in library");
        if (progressive) {
            if (paradigm.kind == ParadigmKind::Active && !explored.count(t->kit_id)) {
                plan.push_back(Action::explore_skill(t->kit_id));
                explored.insert(t->kit_id);
            }
            if (!callable.count(t->tool_id())) {
                plan.push_back(Action::explore_doc(t->tool_id()));
                callable.insert(t->tool_id());
            }
        }
        plan.push_back(Action::call(t->tool_id(), gt.args));
    }
    plan.push_back(Action::answer(fixture.gt_answer));
    return plan;
}

class OraclePolicy : public Policy {
public:
    PolicyDecision decide(const DecisionState& state, const QuestionFixture& fixture,
                          const SkillTree& tree) override {
        auto plan = oracle_plan(fixture, state.paradigm, tree);
        std::size_t idx = state.trajectory.size();
        if (idx < plan.size()) return {plan[idx], std::nullopt};
        return {Action::answer(fixture.gt_answer), std::nullopt};
    }
    const char* name() const override { return "oracle"; }
};

// ---------------------------------------------------------------- scripted

class ScriptedPolicy : public Policy {
public:
    explicit ScriptedPolicy(std::vector<Action> script) : script_(std::move(script)) {}

    PolicyDecision decide(const DecisionState& state, const QuestionFixture&,
                          const SkillTree&) override {
        std::size_t idx = state.trajectory.size();
        if (idx >= script_.size())
            throw std::runtime_error("scripted policy exhausted after " +
                                     std::to_string(script_.size()) + " actions");
        return {script_[idx], std::nullopt};
    }
    const char* name() const override { return "scripted"; }

private:
    std::vector<Action> script_;
};

// Script file: a JSON array of action payloads.
inline std::vector<Action> load_script(const std::string& path) {
    json doc = read_json_file(path);
    if (!doc.is_array()) throw ParseError("script file must hold a JSON array of actions");
    std::vector<Action> script;
    for (const auto& j : doc) script.push_back(Action::from_json(j));
    return script;
}

// ---------------------------------------------------------------- parsing

// Maps raw assistant output to an action: structured payloads name one of the
// meta-actions (any other name is treated as a direct tool call), and plain
// text must carry an answer tag.
inline Action parse_action(const std::string& text) {
    json j = json::object();
    bool structured = false;
    try {
        j = json::parse(text);
        structured = j.is_object() && j.contains("name");
    } catch (const json::exception&) {
        structured = false;
    }
    if (structured) {
        const std::string name = j["name"].get<std::string>();
        if (name == "skill" || name == "doc" || name == "call" || name == "filelist" ||
            name == "answer")
            return Action::from_json(j);
        json args = j.value("arguments", j.value("tool_args", json::object()));
        if (args.is_string()) args = json::parse(args.get<std::string>());
        return Action::call(name, std::move(args));
    }
    std::string answer = extract_answer(text);
    if (!answer.empty()) return Action::answer(answer);
    throw ParseError("unparseable assistant output: " + text.substr(0, 120));
}

}  // namespace skilltree
