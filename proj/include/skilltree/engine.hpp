#pragma once

// Sequential decision engine over the tool library. A decision state carries
// the query, the disclosed context, and the callable set V; V holds exactly
// the tools whose documents have been disclosed (initially or via doc
// exploration), grows monotonically, and changes only on ExploreDoc. Each
// paradigm fixes the initial context and the legal action space:
//   active    - kit table first, explore skill -> doc -> call
//   flat      - every document up front, every tool callable
//   rag       - retrieved documents up front, fixed callable subset
//   2layers   - every brief up front, doc -> call (no skill step)
// The file-listing meta-tool is callable everywhere. Illegal actions yield
// Error observations and leave the state unchanged; only Answer terminates.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skilltree/environment.hpp"
#include "skilltree/errors.hpp"
#include "skilltree/registry.hpp"

namespace skilltree {

// ---------------------------------------------------------------- paradigms

enum class ParadigmKind { Active, Flat, Rag, TwoLayers };

struct Paradigm {
    ParadigmKind kind = ParadigmKind::Active;
    int rag_k = 19;
    std::vector<std::string> rag_forced = {"get_filelist"};

    static Paradigm active() { return {ParadigmKind::Active, 0, {}}; }
    static Paradigm flat() { return {ParadigmKind::Flat, 0, {}}; }
    static Paradigm two_layers() { return {ParadigmKind::TwoLayers, 0, {}}; }
    static Paradigm rag(int k = 19, std::vector<std::string> forced = {"get_filelist"}) {
        return {ParadigmKind::Rag, k, std::move(forced)};
    }

    std::string label() const {
        switch (kind) {
            case ParadigmKind::Active: return "active";
            case ParadigmKind::Flat: return "flat";
            case ParadigmKind::Rag: return "rag";
            case ParadigmKind::TwoLayers: return "2layers";
        }
        return "?";
    }
};

// ---------------------------------------------------------------- actions

enum class ActionKind { ExploreSkill, ExploreDoc, Call, Answer, FileList };

struct Action {
    ActionKind kind = ActionKind::Answer;
    std::string kit_id;   // ExploreSkill
    std::string tool_id;  // ExploreDoc / Call; Call also accepts a bare name
    json args = json::object();  // Call
    std::string path;     // FileList
    std::string text;     // Answer

    static Action explore_skill(std::string kit) {
        Action a;
        a.kind = ActionKind::ExploreSkill;
        a.kit_id = std::move(kit);
        return a;
    }
    static Action explore_doc(std::string tool_id) {
        Action a;
        a.kind = ActionKind::ExploreDoc;
        a.tool_id = std::move(tool_id);
        return a;
    }
    static Action call(std::string tool_id, json args) {
        Action a;
        a.kind = ActionKind::Call;
        a.tool_id = std::move(tool_id);
        a.args = std::move(args);
        return a;
    }
    static Action filelist(std::string path) {
        Action a;
        a.kind = ActionKind::FileList;
        a.path = std::move(path);
        return a;
    }
    static Action answer(std::string text) {
        Action a;
        a.kind = ActionKind::Answer;
        a.text = std::move(text);
        return a;
    }

    json to_json() const {
        json j;
        switch (kind) {
            case ActionKind::ExploreSkill:
                j["name"] = "skill";
                j["kit_id"] = kit_id;
                break;
            case ActionKind::ExploreDoc:
                j["name"] = "doc";
                j["tool_id"] = tool_id;
                break;
            case ActionKind::Call:
                j["name"] = "call";
                j["tool_id"] = tool_id;
                j["tool_args"] = args;
                break;
            case ActionKind::FileList:
                j["name"] = "filelist";
                j["path"] = path;
                break;
            case ActionKind::Answer:
                j["name"] = "answer";
                j["text"] = text;
                break;
        }
        return j;
    }

    static Action from_json(const json& j) {
        const std::string name = j.at("name").get<std::string>();
        if (name == "skill")
            return explore_skill(j.contains("kit_id") ? j["kit_id"].get<std::string>()
                                                      : j.value("kit", ""));
        if (name == "doc") return explore_doc(j.at("tool_id").get<std::string>());
        if (name == "call") {
            json args = j.value("tool_args", json::object());
            if (args.is_string()) args = json::parse(args.get<std::string>());
            return call(j.at("tool_id").get<std::string>(), std::move(args));
        }
        if (name == "filelist") return filelist(j.value("path", ""));
        if (name == "answer") return answer(j.value("text", ""));
        throw ParseError("unknown action name \"" + name + "\"");
    }
};

// ---------------------------------------------------------------- observations

enum class ObservationKind { InfoSummary, InfoCatalog, InfoDoc, Exec, Error, Final };

inline const char* to_string(ObservationKind k) {
    switch (k) {
        case ObservationKind::InfoSummary: return "info_summary";
        case ObservationKind::InfoCatalog: return "info_catalog";
        case ObservationKind::InfoDoc: return "info_doc";
        case ObservationKind::Exec: return "exec";
        case ObservationKind::Error: return "error";
        case ObservationKind::Final: return "final";
    }
    return "?";
}

inline ObservationKind observation_kind_from_string(std::string_view s) {
    if (s == "info_summary") return ObservationKind::InfoSummary;
    if (s == "info_catalog") return ObservationKind::InfoCatalog;
    if (s == "info_doc") return ObservationKind::InfoDoc;
    if (s == "exec") return ObservationKind::Exec;
    if (s == "error") return ObservationKind::Error;
    if (s == "final") return ObservationKind::Final;
    throw ParseError("unknown observation kind \"" + std::string(s) + "\"");
}

struct Observation {
    ObservationKind kind = ObservationKind::Error;
    std::string payload;
};

inline bool is_info(ObservationKind k) {
    return k == ObservationKind::InfoSummary || k == ObservationKind::InfoCatalog ||
           k == ObservationKind::InfoDoc;
}

// ---------------------------------------------------------------- state

struct CallRecord {
    std::string tool;  // qualified id for library tools, "get_filelist" for listings
    json args;
};

struct DecisionState {
    std::string question_id;
    std::string query;
    Paradigm paradigm;
    std::string o0;  // initial context block
    std::set<std::string> callable;       // qualified tool ids (V)
    std::vector<std::pair<Action, Observation>> trajectory;
    std::vector<CallRecord> calls;        // calls that reached the executor
    std::vector<std::string> warnings;
    std::set<std::string> explored_kits;  // accepted ExploreSkill targets
    std::set<std::string> disclosed;      // tools whose document is in context
    bool terminated = false;
    std::string answer;
};

inline std::string render_document_block(const SkillTree& tree, const ToolSpec& t) {
    return "## " + t.tool_id() + "\n" + render_document(tree, t.tool_id());
}

// o_0 per paradigm; rag requires the retrieval result (tool names in rank order).
inline DecisionState init_state(
    const QuestionFixture& q, const SkillTree& tree, const Paradigm& paradigm,
    const std::optional<std::vector<std::string>>& retrieved = std::nullopt) {
    DecisionState s;
    s.question_id = q.question_id;
    s.query = q.query;
    s.paradigm = paradigm;
    switch (paradigm.kind) {
        case ParadigmKind::Active:
            s.o0 = render_kit_table(tree);
            break;
        case ParadigmKind::Flat: {
            std::string blocks;
            for (const auto& t : tree.tools) {
                if (!blocks.empty()) blocks += "\n\n";
                blocks += render_document_block(tree, t);
                s.callable.insert(t.tool_id());
                s.disclosed.insert(t.tool_id());
            }
            s.o0 = std::move(blocks);
            break;
        }
        case ParadigmKind::Rag: {
            if (!retrieved)
                throw ConfigError("rag paradigm requires a retrieval result");
            std::string blocks;
            for (const auto& name : *retrieved) {
                const ToolSpec* t = tree.find_tool(name);
                if (!t)
                    throw ConfigError("retrieved tool \"" + name + "\" not in library");
                if (!blocks.empty()) blocks += "\n\n";
                blocks += render_document_block(tree, *t);
                s.callable.insert(t->tool_id());
                s.disclosed.insert(t->tool_id());
            }
            s.o0 = std::move(blocks);
            break;
        }
        case ParadigmKind::TwoLayers: {
            std::string blocks;
            for (const auto& n : tree.nodes) {
                if (!blocks.empty()) blocks += "\n";
                blocks += "### kit: " + n.kit_id + "\n" + render_catalog(tree, n.kit_id);
            }
            s.o0 = std::move(blocks);
            break;
        }
    }
    return s;
}

// ---------------------------------------------------------------- stepping

inline Observation step(DecisionState& s, const Action& a, Environment& env,
                        const SkillTree& tree) {
    if (s.terminated) throw std::logic_error("episode terminated");
    auto finish = [&](Observation obs) {
        s.trajectory.emplace_back(a, obs);
        return obs;
    };
    auto reject = [&](const std::string& msg) {
        return finish({ObservationKind::Error, msg});
    };
    const ParadigmKind kind = s.paradigm.kind;

    switch (a.kind) {
        case ActionKind::ExploreSkill: {
            if (kind != ParadigmKind::Active)
                return reject("action \"skill\" not in paradigm action space");
            const SkillNode* node = tree.find_kit(a.kit_id);
            if (!node) return reject("unknown kit \"" + a.kit_id + "\"");
            s.explored_kits.insert(a.kit_id);
            return finish({ObservationKind::InfoCatalog, render_catalog(tree, a.kit_id)});
        }
        case ActionKind::ExploreDoc: {
            if (kind != ParadigmKind::Active && kind != ParadigmKind::TwoLayers)
                return reject("action \"doc\" not in paradigm action space");
            if (!valid_tool_id(a.tool_id))
                return reject("malformed tool id \"" + a.tool_id + "\"");
            const ToolSpec* t = tree.find_tool_id(a.tool_id);
            if (!t) return reject("unknown tool \"" + a.tool_id + "\"");
            if (kind == ParadigmKind::Active && !s.explored_kits.count(t->kit_id))
                s.warnings.push_back("doc(\"" + a.tool_id + "\") before skill(\"" +
                                    t->kit_id + "\")");
            s.callable.insert(t->tool_id());
            s.disclosed.insert(t->tool_id());
            return finish({ObservationKind::InfoDoc, render_document(tree, a.tool_id)});
        }
        case ActionKind::Call: {
            const ToolSpec* t = a.tool_id.find('.') != std::string::npos
                                    ? tree.find_tool_id(a.tool_id)
                                    : tree.find_tool(a.tool_id);
            if (!t) return reject("unknown tool \"" + a.tool_id + "\"");
            if (!a.args.is_object()) return reject("call args must be a JSON object");
            for (auto it = a.args.begin(); it != a.args.end(); ++it) {
                bool known = false;
                for (const auto& p : t->params)
                    if (p.name == it.key()) known = true;
                if (!known)
                    return reject("unknown parameter \"" + it.key() + "\" for tool \"" +
                                  t->tool_id() + "\"");
            }
            if (!s.callable.count(t->tool_id()))
                return reject("tool not callable: \"" + t->tool_id() +
                              "\" (document not disclosed)");
            ExecResult r = env.execute(t->name, a.args);
            s.calls.push_back({t->tool_id(), a.args});
            return finish({r.ok ? ObservationKind::Exec : ObservationKind::Error,
                           r.payload});
        }
        case ActionKind::FileList: {
            std::string listing = env.filelist(a.path);
            s.calls.push_back({"get_filelist", json{{"path", a.path}}});
            return finish({ObservationKind::Exec, listing});
        }
        case ActionKind::Answer: {
            s.terminated = true;
            s.answer = a.text;
            return finish({ObservationKind::Final, a.text});
        }
    }
    return reject("unknown action");
}

// ---------------------------------------------------------------- records

struct TurnRecord {
    json action;
    ObservationKind obs_kind = ObservationKind::Error;
    std::int64_t obs_len = 0;
    std::int64_t input_tokens = 0;
};

struct TrajectoryRecord {
    std::string question_id;
    std::string paradigm;
    std::vector<TurnRecord> turns;
    std::vector<CallRecord> calls;
    std::optional<std::string> answer;
    bool terminated = false;
    std::optional<std::string> error;  // policy failure, if any

    json to_json() const {
        json j;
        j["question_id"] = question_id;
        j["paradigm"] = paradigm;
        j["turns"] = json::array();
        for (const auto& t : turns)
            j["turns"].push_back({{"action", t.action},
                                  {"observation_kind", to_string(t.obs_kind)},
                                  {"observation_len", t.obs_len},
                                  {"input_tokens", t.input_tokens}});
        j["calls"] = json::array();
        for (const auto& c : calls)
            j["calls"].push_back({{"tool", c.tool}, {"args", c.args}});
        j["answer"] = answer ? json(*answer) : json(nullptr);
        j["terminated"] = terminated;
        j["turn_count"] = turns.size();
        if (error) j["error"] = *error;
        return j;
    }

    static TrajectoryRecord from_json(const json& j) {
        TrajectoryRecord r;
        r.question_id = j.at("question_id").get<std::string>();
        r.paradigm = j.at("paradigm").get<std::string>();
        for (const auto& jt : j.at("turns")) {
            TurnRecord t;
            t.action = jt.at("action");
            t.obs_kind =
                observation_kind_from_string(jt.at("observation_kind").get<std::string>());
            t.obs_len = jt.at("observation_len").get<std::int64_t>();
            t.input_tokens = jt.at("input_tokens").get<std::int64_t>();
            r.turns.push_back(std::move(t));
        }
        for (const auto& jc : j.at("calls"))
            r.calls.push_back({jc.at("tool").get<std::string>(), jc.at("args")});
        if (j.contains("answer") && !j["answer"].is_null())
            r.answer = j["answer"].get<std::string>();
        r.terminated = j.value("terminated", false);
        if (j.contains("error")) r.error = j["error"].get<std::string>();
        return r;
    }
};

}  // namespace skilltree
