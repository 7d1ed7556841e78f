#pragma once

// Deterministic mock tool-execution environment: question fixtures script every
// tool response, a virtual filesystem backs the file-listing meta-tool, and
// output paths are counter-suffixed per (tool, question) so repeated calls
// yield distinct, predictable files. Unmatched calls produce errors, never
// aborts.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skilltree/errors.hpp"
#include "skilltree/registry.hpp"

namespace skilltree {

struct ToolBehavior {
    std::string tool;                       // unqualified name
    std::optional<json> exact_args;         // canonical argument match
    std::optional<json> args_pattern;       // per-key match, "*" = any value
    std::string response_template;          // may use {n} {last_n} {count} {files}
    std::vector<std::string> output_files;  // path templates, {n} = call counter
    std::optional<std::string> error_response;
};

struct GtCall {
    std::string tool;  // unqualified name
    json args;
};

struct QuestionFixture {
    std::string question_id;
    std::string query;
    std::vector<std::string> choices;
    std::string gt_answer;
    std::vector<GtCall> gt_trajectory;
    std::vector<std::string> initial_files;  // absolute paths
    std::vector<ToolBehavior> behaviors;
};

// nlohmann objects keep keys sorted, so dumping is already canonical.
inline std::string canonical_args(const json& args) { return args.dump(); }

// ---------------------------------------------------------------- fixture IO

inline QuestionFixture parse_fixture(const json& doc) {
    for (const char* field : {"question_id", "query", "gt_answer", "gt_trajectory"})
        if (!doc.contains(field))
            throw ParseError(std::string("fixture missing field \"") + field + "\"");
    QuestionFixture q;
    q.question_id = doc["question_id"].get<std::string>();
    q.query = doc["query"].get<std::string>();
    q.gt_answer = doc["gt_answer"].get<std::string>();
    for (const auto& c : doc.value("choices", json::array()))
        q.choices.push_back(c.get<std::string>());
    for (const auto& jc : doc["gt_trajectory"]) {
        GtCall call;
        call.tool = jc.at("tool").get<std::string>();
        if (call.tool.find('.') != std::string::npos)
            throw ParseError("ground-truth tool \"" + call.tool +
                             "\" must be an unqualified name");
        call.args = jc.value("args", json::object());
        if (!call.args.is_object())
            throw ParseError("ground-truth args must be an object (tool \"" + call.tool + "\")");
        q.gt_trajectory.push_back(std::move(call));
    }
    for (const auto& f : doc.value("initial_files", json::array()))
        q.initial_files.push_back(f.get<std::string>());
    for (const auto& jb : doc.value("behaviors", json::array())) {
        ToolBehavior b;
        b.tool = jb.at("tool").get<std::string>();
        if (jb.contains("args")) b.exact_args = jb["args"];
        if (jb.contains("args_pattern")) b.args_pattern = jb["args_pattern"];
        if (b.exact_args.has_value() == b.args_pattern.has_value())
            throw ParseError("behavior for \"" + b.tool +
                             "\" must set exactly one of \"args\" or \"args_pattern\"");
        b.response_template = jb.value("response_template", "");
        for (const auto& f : jb.value("output_files", json::array()))
            b.output_files.push_back(f.get<std::string>());
        if (jb.contains("error_response"))
            b.error_response = jb["error_response"].get<std::string>();
        q.behaviors.push_back(std::move(b));
    }
    return q;
}

inline QuestionFixture load_fixture(const std::string& path) {
    return parse_fixture(read_json_file(path));
}

// Accepts a single fixture file or a directory of *.json fixtures (sorted by
// filename for a stable question order).
inline std::vector<QuestionFixture> load_fixtures(const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<QuestionFixture> out;
    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ".json")
                files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) out.push_back(load_fixture(f));
    } else {
        out.push_back(load_fixture(path));
    }
    if (out.empty()) throw ParseError("no fixtures found under " + path);
    return out;
}

// ---------------------------------------------------------------- environment

struct ExecResult {
    bool ok = false;
    std::string payload;
};

class Environment {
public:
    explicit Environment(const QuestionFixture& fixture) : fixture_(&fixture) {
        for (const auto& f : fixture.initial_files) files_.insert(f);
    }

    // Sorted newline-joined listing of registered paths under the prefix.
    std::string filelist(std::string_view prefix) const {
        std::string out;
        for (const auto& f : files_) {
            if (f.rfind(prefix, 0) != 0) continue;
            if (!out.empty()) out += "\n";
            out += f;
        }
        return out;
    }

    ExecResult execute(std::string_view tool_name, const json& args) {
        if (tool_name == "get_filelist")
            return {true, filelist(args.is_object() ? args.value("path", "") : "")};
        const ToolBehavior* match = find_behavior(tool_name, args);
        if (!match)
            return {false, "no scripted behavior for tool \"" + std::string(tool_name) +
                               "\" with the given arguments"};
        if (match->error_response) return {false, *match->error_response};
        return {true, apply_behavior(*match)};
    }

    const std::set<std::string>& files() const { return files_; }

private:
    const ToolBehavior* find_behavior(std::string_view tool, const json& args) const {
        // Exact matchers take precedence; within a class, declaration order wins.
        for (const auto& b : fixture_->behaviors)
            if (b.tool == tool && b.exact_args && *b.exact_args == args) return &b;
        for (const auto& b : fixture_->behaviors)
            if (b.tool == tool && b.args_pattern && pattern_matches(*b.args_pattern, args))
                return &b;
        return nullptr;
    }

    static bool pattern_matches(const json& pattern, const json& args) {
        if (!args.is_object()) return false;
        for (auto it = pattern.begin(); it != pattern.end(); ++it) {
            if (!args.contains(it.key())) return false;
            if (it.value().is_string() && it.value().get<std::string>() == "*") continue;
            if (args.at(it.key()) != it.value()) return false;
        }
        return true;
    }

    static void replace_all(std::string& text, std::string_view from, std::string_view to) {
        for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos;
             pos += to.size())
            text.replace(pos, from.size(), to);
    }

    std::string apply_behavior(const ToolBehavior& b) {
        int first = counters_[b.tool] + 1;
        std::vector<std::string> produced;
        for (const auto& tmpl : b.output_files) {
            int n = ++counters_[b.tool];
            std::string path = tmpl;
            replace_all(path, "{n}", std::to_string(n));
            files_.insert(path);
            produced.push_back(std::move(path));
        }
        int last = counters_[b.tool];
        std::string out = b.response_template;
        replace_all(out, "{n}", std::to_string(first));
        replace_all(out, "{last_n}", std::to_string(last));
        replace_all(out, "{count}", std::to_string(produced.size()));
        if (out.find("{files}") != std::string::npos) {
            std::string joined;
            for (const auto& p : produced) {
                if (!joined.empty()) joined += ", ";
                joined += p;
            }
            replace_all(out, "{files}", joined);
        }
        return out;
    }

    const QuestionFixture* fixture_;
    std::set<std::string> files_;
    std::map<std::string, int> counters_;  // per-tool output counters
};

}  // namespace skilltree
