#pragma once

// Skill-tree registry: a three-layer tool library (kit summaries -> tool
// briefs -> tool documents) with an orthogonal kit partition, plus loading,
// validation, deterministic rendering, and seeded regrouping.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skilltree/errors.hpp"
#include "skilltree/tokens.hpp"

namespace skilltree {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct ParamSpec {
    std::string name;
    std::string type;  // string | number | integer | boolean | array | object
    bool required = true;
};

struct ToolSpec {
    std::string name;    // unqualified, unique across the library
    std::string kit_id;  // owning kit
    std::string brief;   // catalog entry text
    std::string document;
    std::vector<ParamSpec> params;

    std::string tool_id() const { return kit_id + "." + name; }
};

struct SkillNode {
    std::string kit_id;
    std::string summary;  // skill-layer text shown in the kit table
    std::string applicable_tasks;
    std::string typical_usage;
    std::vector<std::string> member_tools;  // unqualified names, manifest order
};

struct SkillTree {
    std::vector<SkillNode> nodes;  // manifest order
    std::vector<ToolSpec> tools;   // manifest order, grouped kit by kit

    std::size_t size() const { return tools.size(); }

    const SkillNode* find_kit(std::string_view kit_id) const {
        for (const auto& n : nodes)
            if (n.kit_id == kit_id) return &n;
        return nullptr;
    }

    const ToolSpec* find_tool(std::string_view name) const {
        for (const auto& t : tools)
            if (t.name == name) return &t;
        return nullptr;
    }

    const ToolSpec* find_tool_id(std::string_view tool_id) const {
        auto dot = tool_id.find('.');
        if (dot == std::string_view::npos) return nullptr;
        auto kit = tool_id.substr(0, dot);
        auto name = tool_id.substr(dot + 1);
        const ToolSpec* t = find_tool(name);
        if (!t || t->kit_id != kit) return nullptr;
        return t;
    }
};

// ---------------------------------------------------------------- id grammar

inline bool valid_kit_id(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

inline bool valid_tool_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

inline bool valid_tool_id(std::string_view s) {
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return false;
    return valid_kit_id(s.substr(0, dot)) && valid_tool_name(s.substr(dot + 1));
}

inline std::pair<std::string, std::string> split_tool_id(std::string_view tool_id) {
    if (!valid_tool_id(tool_id))
        throw ValidationError("malformed tool id \"" + std::string(tool_id) +
                              "\" (expected kit.tool_name)");
    auto dot = tool_id.find('.');
    return {std::string(tool_id.substr(0, dot)), std::string(tool_id.substr(dot + 1))};
}

// ---------------------------------------------------------------- validation

// Throws ValidationError naming the first violated invariant.
inline void validate_tree(const SkillTree& tree) {
    auto fail = [](const std::string& what) {
        throw ValidationError("validation error: " + what);
    };
    if (tree.nodes.empty()) fail("no kits");
    std::set<std::string> kit_ids;
    for (const auto& n : tree.nodes) {
        if (!valid_kit_id(n.kit_id)) fail("invalid kit id \"" + n.kit_id + "\"");
        if (!kit_ids.insert(n.kit_id).second) fail("duplicate kit \"" + n.kit_id + "\"");
        if (n.summary.empty()) fail("empty summary (kit \"" + n.kit_id + "\")");
        if (n.member_tools.empty()) fail("empty member list (kit \"" + n.kit_id + "\")");
    }
    std::map<std::string, std::string> owner;  // tool name -> kit
    for (const auto& t : tree.tools) {
        if (!valid_tool_name(t.name)) fail("invalid tool name \"" + t.name + "\"");
        if (!kit_ids.count(t.kit_id))
            fail("tool \"" + t.name + "\" references unknown kit \"" + t.kit_id + "\"");
        if (t.brief.empty()) fail("empty brief (tool \"" + t.name + "\")");
        if (t.document.empty()) fail("empty document (tool \"" + t.name + "\")");
        if (builtin_token_count(t.document) < builtin_token_count(t.brief))
            fail("document shorter than brief (tool \"" + t.name + "\")");
        std::set<std::string> pnames;
        for (const auto& p : t.params) {
            if (p.name.empty()) fail("empty parameter name (tool \"" + t.name + "\")");
            if (!pnames.insert(p.name).second)
                fail("duplicate parameter \"" + p.name + "\" (tool \"" + t.name + "\")");
        }
        auto ins = owner.emplace(t.name, t.kit_id);
        if (!ins.second)
            fail("duplicate tool \"" + t.name + "\" (kits \"" + ins.first->second +
                 "\", \"" + t.kit_id + "\")");
    }
    // The node member lists and the tool vector must describe the same partition.
    std::size_t counted = 0;
    for (const auto& n : tree.nodes) {
        std::set<std::string> members(n.member_tools.begin(), n.member_tools.end());
        if (members.size() != n.member_tools.size())
            fail("duplicate member in kit \"" + n.kit_id + "\"");
        counted += members.size();
        for (const auto& m : n.member_tools) {
            auto it = owner.find(m);
            if (it == owner.end())
                fail("member \"" + m + "\" of kit \"" + n.kit_id + "\" has no tool spec");
            if (it->second != n.kit_id)
                fail("partition mismatch for tool \"" + m + "\"");
        }
    }
    if (counted != tree.tools.size()) fail("partition mismatch: unassigned tools");
}

// ---------------------------------------------------------------- manifest IO

inline SkillTree parse_manifest(const json& doc) {
    if (!doc.is_object() || !doc.contains("kits"))
        throw ParseError("manifest missing field \"kits\"");
    if (!doc["kits"].is_array()) throw ParseError("manifest field \"kits\" must be an array");
    SkillTree tree;
    for (const auto& jk : doc["kits"]) {
        for (const char* field : {"kit", "applicable_tasks", "typical_usage", "tools"})
            if (!jk.contains(field))
                throw ParseError(std::string("kit entry missing field \"") + field + "\"");
        SkillNode node;
        node.kit_id = jk["kit"].get<std::string>();
        node.applicable_tasks = jk["applicable_tasks"].get<std::string>();
        node.typical_usage = jk["typical_usage"].get<std::string>();
        node.summary = jk.value("summary", node.applicable_tasks);
        for (const auto& jt : jk["tools"]) {
            for (const char* field : {"name", "brief", "document"})
                if (!jt.contains(field))
                    throw ParseError(std::string("tool entry missing field \"") + field + "\"");
            ToolSpec tool;
            tool.name = jt["name"].get<std::string>();
            tool.kit_id = node.kit_id;
            tool.brief = jt["brief"].get<std::string>();
            tool.document = jt["document"].get<std::string>();
            for (const auto& jp : jt.value("params", json::array())) {
                ParamSpec p;
                p.name = jp.at("name").get<std::string>();
                p.type = jp.value("type", "string");
                p.required = jp.value("required", true);
                tool.params.push_back(std::move(p));
            }
            node.member_tools.push_back(tool.name);
            tree.tools.push_back(std::move(tool));
        }
        tree.nodes.push_back(std::move(node));
    }
    validate_tree(tree);
    return tree;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

inline SkillTree load_manifest(const std::string& path) {
    return parse_manifest(read_json_file(path));
}

// ---------------------------------------------------------------- rendering

// Skill layer: one JSON entry per kit, manifest order, stable formatting.
inline std::string render_kit_table(const SkillTree& tree) {
    ordered_json table = ordered_json::array();
    for (const auto& n : tree.nodes) {
        ordered_json entry;
        entry["kit"] = n.kit_id;
        entry["applicable_tasks"] = n.applicable_tasks;
        entry["typical_usage"] = n.typical_usage;
        table.push_back(std::move(entry));
    }
    return table.dump(2);
}

// Catalog layer: one "- kit.name: brief" entry per member tool, manifest order.
inline std::string render_catalog(const SkillTree& tree, std::string_view kit_id) {
    const SkillNode* node = tree.find_kit(kit_id);
    if (!node) throw ValidationError("unknown kit \"" + std::string(kit_id) + "\"");
    std::string out;
    for (const auto& name : node->member_tools) {
        const ToolSpec* t = tree.find_tool(name);
        out += "- " + t->tool_id() + ": " + t->brief + "\n";
    }
    return out;
}

// Document layer: full execution document plus the parameter schema.
inline std::string render_document(const SkillTree& tree, std::string_view tool_id) {
    split_tool_id(tool_id);  // malformed ids fail here with a precise message
    const ToolSpec* t = tree.find_tool_id(tool_id);
    if (!t)
        throw ValidationError("unknown tool \"" + std::string(tool_id) + "\"");
    std::string out = t->document;
    out += "\n\nParameters:\n";
    if (t->params.empty()) out += "- (none)\n";
    for (const auto& p : t->params)
        out += "- " + p.name + " (" + p.type + (p.required ? ", required" : ", optional") + ")\n";
    return out;
}

// ---------------------------------------------------------------- regrouping

// Deterministic Fisher-Yates permutation of 0..n-1 (stable across platforms).
inline std::vector<std::size_t> shuffled_indexes(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

// Random-ablation tree: same kits, same node sizes, same summaries; tools are
// permuted across kits by the seed and re-qualified to their new kit.
inline SkillTree random_regroup(const SkillTree& tree, std::uint64_t seed) {
    auto perm = shuffled_indexes(tree.tools.size(), seed);
    SkillTree out;
    std::size_t next = 0;
    for (const auto& n : tree.nodes) {
        SkillNode node = n;
        node.member_tools.clear();
        for (std::size_t i = 0; i < n.member_tools.size(); ++i) {
            ToolSpec tool = tree.tools[perm[next++]];
            tool.kit_id = node.kit_id;
            node.member_tools.push_back(tool.name);
            out.tools.push_back(std::move(tool));
        }
        out.nodes.push_back(std::move(node));
    }
    validate_tree(out);
    return out;
}

}  // namespace skilltree
