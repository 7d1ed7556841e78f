#pragma once

// Scaling harness: derives reduced or enlarged tool libraries from a base
// manifest, then sweeps (stage x paradigm) cells and records per-cell reports
// plus a compact curves.csv for plotting context overhead against tree size.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "skilltree/engine.hpp"
#include "skilltree/errors.hpp"
#include "skilltree/metrics.hpp"
#include "skilltree/registry.hpp"
#include "skilltree/retrieval.hpp"
#include "skilltree/runner.hpp"

namespace skilltree {

// ------------------------------------------------------------ tree sampling

enum class SampleMode { Stratified, Uniform };

inline SampleMode sample_mode_from_string(const std::string& s) {
    if (s == "stratified") return SampleMode::Stratified;
    if (s == "uniform") return SampleMode::Uniform;
    throw ConfigError("unknown sampling mode: " + s);
}

// Union of ground-truth tool names (unqualified) across fixtures, checked
// against the library.
inline std::set<std::string> gt_tool_names(const std::vector<QuestionFixture>& fixtures,
                                           const SkillTree& tree) {
    std::set<std::string> names;
    for (const auto& f : fixtures)
        for (const auto& call : f.gt_trajectory) {
            if (!tree.find_tool(call.tool))
                throw ConfigError("ground-truth tool not in library: " + call.tool);
            names.insert(call.tool);
        }
    return names;
}

// Largest-remainder apportionment of `want` picks across per-kit pools,
// capped at each pool size; leftovers spill into remaining capacity.
inline std::vector<std::size_t> proportional_quotas(const std::vector<std::size_t>& pool,
                                                    std::size_t want) {
    std::size_t total = std::accumulate(pool.begin(), pool.end(), std::size_t{0});
    want = std::min(want, total);
    std::vector<std::size_t> quotas(pool.size(), 0);
    if (total == 0 || want == 0) return quotas;
    std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (-rem proxy via sort)
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        quotas[i] = want * pool[i] / total;
        assigned += quotas[i];
        remainders.emplace_back(want * pool[i] % total, i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t leftover = want - assigned;
    for (const auto& [rem, i] : remainders) {
        if (leftover == 0) break;
        if (quotas[i] < pool[i]) {
            ++quotas[i];
            --leftover;
        }
    }
    for (std::size_t i = 0; i < pool.size() && leftover > 0; ++i) {
        std::size_t spare = pool[i] - quotas[i];
        std::size_t take = std::min(spare, leftover);
        quotas[i] += take;
        leftover -= take;
    }
    return quotas;
}

// Rebuilds a tree keeping `keep` tools plus `extra` sampled distractors.
// Stratified sampling apportions picks across kits by pool size; uniform
// sampling ignores kit boundaries. Member order inside each kit follows the
// base manifest; kits left empty are dropped.
inline SkillTree build_scaled_tree(const SkillTree& base, const std::set<std::string>& keep,
                                   std::size_t extra, std::uint64_t seed,
                                   SampleMode mode = SampleMode::Stratified) {
    for (const auto& name : keep)
        if (!base.find_tool(name)) throw ConfigError("kept tool not in library: " + name);

    // Distractor pools per kit, in manifest order.
    std::vector<std::vector<std::string>> pools(base.nodes.size());
    std::size_t pool_total = 0;
    for (std::size_t i = 0; i < base.nodes.size(); ++i)
        for (const auto& member : base.nodes[i].member_tools)
            if (!keep.count(member)) {
                pools[i].push_back(member);
                ++pool_total;
            }
    if (extra > pool_total)
        throw ConfigError("not enough distractor tools: requested " +
                          std::to_string(extra) + ", available " +
                          std::to_string(pool_total));

    std::set<std::string> selected;
    if (mode == SampleMode::Stratified) {
        std::vector<std::size_t> sizes;
        sizes.reserve(pools.size());
        for (const auto& p : pools) sizes.push_back(p.size());
        auto quotas = proportional_quotas(sizes, extra);
        for (std::size_t i = 0; i < pools.size(); ++i) {
            auto order = shuffled_indexes(pools[i].size(), seed * 1000003ULL + i);
            for (std::size_t j = 0; j < quotas[i]; ++j) selected.insert(pools[i][order[j]]);
        }
    } else {
        std::vector<std::string> flat;
        for (const auto& p : pools) flat.insert(flat.end(), p.begin(), p.end());
        auto order = shuffled_indexes(flat.size(), seed);
        std::size_t take = std::min(extra, flat.size());
        for (std::size_t j = 0; j < take; ++j) selected.insert(flat[order[j]]);
    }

    SkillTree out;
    for (const auto& node : base.nodes) {
        SkillNode copy = node;
        copy.member_tools.clear();
        for (const auto& member : node.member_tools)
            if (keep.count(member) || selected.count(member))
                copy.member_tools.push_back(member);
        if (!copy.member_tools.empty()) out.nodes.push_back(std::move(copy));
    }
    for (const auto& tool : base.tools)
        if (keep.count(tool.name) || selected.count(tool.name)) out.tools.push_back(tool);
    validate_tree(out);
    return out;
}

// Minimal library: exactly the tools the ground truth needs.
inline SkillTree extract_gt_minimal(const SkillTree& base,
                                    const std::vector<QuestionFixture>& fixtures) {
    return build_scaled_tree(base, gt_tool_names(fixtures, base), 0, 0);
}

// ------------------------------------------------------------ stage builders

struct Stage {
    std::string label;
    SkillTree tree;
};

// gt-minimal + N distractors per increment, then the full library as "all".
inline std::vector<Stage> same_domain_stages(const SkillTree& base,
                                             const std::vector<QuestionFixture>& fixtures,
                                             const std::vector<std::size_t>& increments,
                                             std::uint64_t seed,
                                             SampleMode mode = SampleMode::Stratified) {
    auto keep = gt_tool_names(fixtures, base);
    std::vector<Stage> stages;
    for (std::size_t inc : increments)
        stages.push_back({"gt+" + std::to_string(inc),
                          build_scaled_tree(base, keep, inc, seed, mode)});
    stages.push_back({"all", base});
    return stages;
}

// Concatenates two libraries; validation rejects colliding kit ids or tools.
inline SkillTree merge_trees(const SkillTree& a, const SkillTree& b) {
    SkillTree out = a;
    out.nodes.insert(out.nodes.end(), b.nodes.begin(), b.nodes.end());
    out.tools.insert(out.tools.end(), b.tools.begin(), b.tools.end());
    validate_tree(out);
    return out;
}

// Base library, then cumulative merges with each out-of-domain manifest.
inline std::vector<Stage> cross_domain_stages(const SkillTree& base,
                                              const std::vector<SkillTree>& noise) {
    std::vector<Stage> stages;
    stages.push_back({"base", base});
    SkillTree current = base;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        current = merge_trees(current, noise[i]);
        stages.push_back({"stage" + std::to_string(i + 1), current});
    }
    return stages;
}

// ---------------------------------------------------------------- plan files

enum class ScalingMode { SameDomain, CrossDomain };

struct ScalingPlan {
    ScalingMode mode = ScalingMode::SameDomain;
    std::vector<std::size_t> increments;
    std::uint64_t seed = 0;
    SampleMode sampling = SampleMode::Stratified;
    std::vector<std::string> stage_manifests;  // resolved paths
    std::vector<std::string> paradigms;        // labels, see parse_paradigm_spec
};

inline ScalingPlan parse_scaling_plan(const json& doc, const std::string& base_dir) {
    ScalingPlan plan;
    const std::string mode = doc.value("mode", "");
    if (mode == "same_domain")
        plan.mode = ScalingMode::SameDomain;
    else if (mode == "cross_domain")
        plan.mode = ScalingMode::CrossDomain;
    else
        throw ParseError("scaling plan needs mode same_domain or cross_domain");
    if (doc.contains("increments"))
        plan.increments = doc["increments"].get<std::vector<std::size_t>>();
    for (std::size_t i = 1; i < plan.increments.size(); ++i)
        if (plan.increments[i] <= plan.increments[i - 1])
            throw ParseError("plan increments must be strictly increasing");
    plan.seed = doc.value("seed", std::uint64_t{0});
    plan.sampling = sample_mode_from_string(doc.value("sampling", "stratified"));
    if (doc.contains("stage_manifests"))
        for (const auto& rel : doc["stage_manifests"]) {
            std::filesystem::path p = rel.get<std::string>();
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            plan.stage_manifests.push_back(p.lexically_normal().string());
        }
    if (!doc.contains("paradigms") || doc["paradigms"].empty())
        throw ParseError("scaling plan needs a non-empty paradigms list");
    plan.paradigms = doc["paradigms"].get<std::vector<std::string>>();
    if (plan.mode == ScalingMode::CrossDomain && plan.stage_manifests.empty())
        throw ParseError("cross_domain plan needs stage_manifests");
    return plan;
}

inline ScalingPlan load_scaling_plan(const std::string& path) {
    return parse_scaling_plan(read_json_file(path),
                              std::filesystem::path(path).parent_path().string());
}

inline std::vector<Stage> plan_stages(const ScalingPlan& plan, const SkillTree& base,
                                      const std::vector<QuestionFixture>& fixtures) {
    if (plan.mode == ScalingMode::SameDomain)
        return same_domain_stages(base, fixtures, plan.increments, plan.seed, plan.sampling);
    std::vector<SkillTree> noise;
    noise.reserve(plan.stage_manifests.size());
    for (const auto& path : plan.stage_manifests) noise.push_back(load_manifest(path));
    return cross_domain_stages(base, noise);
}

// ------------------------------------------------------- paradigm spec labels

struct ParadigmSpec {
    Paradigm paradigm;
    std::string label;
    std::optional<std::uint64_t> regroup_seed;  // "random:<seed>" regroups the tree
};

// Accepts "active", "flat", "rag", "2layers", or "random:<seed>".
inline ParadigmSpec parse_paradigm_spec(const std::string& text) {
    ParadigmSpec spec;
    spec.label = text;
    if (text == "active") {
        spec.paradigm = Paradigm::active();
    } else if (text == "flat") {
        spec.paradigm = Paradigm::flat();
    } else if (text == "rag") {
        spec.paradigm = Paradigm::rag();
    } else if (text == "2layers") {
        spec.paradigm = Paradigm::two_layers();
    } else if (text.rfind("random:", 0) == 0) {
        spec.paradigm = Paradigm::active();
        try {
            spec.regroup_seed = std::stoull(text.substr(7));
        } catch (const std::exception&) {
            throw ConfigError("bad regroup seed in paradigm spec: " + text);
        }
    } else {
        throw ConfigError("unknown paradigm: " + text);
    }
    return spec;
}

// ----------------------------------------------------------------- the sweep

struct MatrixCell {
    std::string stage;
    std::size_t tree_size = 0;
    std::string paradigm;
    RunReport report;
    std::vector<TrajectoryRecord> records;
};

struct MatrixOptions {
    RunLimits limits;
    ScoreOptions scoring;
    std::string out_dir;  // empty -> nothing written
    EmbeddingConfig embedding;
};

inline std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '_'
                          ? c
                          : '-');
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << text;
}

// Runs one (tree, paradigm) cell over all fixtures with the given policy.
inline MatrixCell run_cell(const std::string& stage_label, const SkillTree& tree,
                           const ParadigmSpec& spec,
                           const std::vector<QuestionFixture>& fixtures, Policy& policy,
                           const MatrixOptions& opts) {
    SkillTree working = tree;
    if (spec.regroup_seed) working = random_regroup(tree, *spec.regroup_seed);

    std::optional<ToolIndex> index;
    if (spec.paradigm.kind == ParadigmKind::Rag)
        index = build_index(working, opts.embedding);

    MatrixCell cell;
    cell.stage = stage_label;
    cell.tree_size = working.tools.size();
    cell.paradigm = spec.label;
    std::vector<QuestionScore> rows;
    for (const auto& fixture : fixtures) {
        EpisodeConfig cfg;
        cfg.paradigm = spec.paradigm;
        cfg.limits = opts.limits;
        cfg.paradigm_label = spec.label;
        if (index)
            cfg.retrieved = retrieve(*index, fixture.query, spec.paradigm.rag_k,
                                     spec.paradigm.rag_forced);
        auto record = run_episode(fixture, working, policy, cfg);
        rows.push_back(score_question(record, fixture, opts.scoring));
        cell.records.push_back(std::move(record));
    }
    cell.report = aggregate(rows);
    return cell;
}

inline std::string curves_csv(const std::vector<MatrixCell>& cells) {
    std::string csv = "stage,tree_size,paradigm,accuracy,tokens_per_question,tokens_per_turn\n";
    for (const auto& cell : cells) {
        csv += cell.stage + "," + std::to_string(cell.tree_size) + "," + cell.paradigm +
               "," + format_fixed(cell.report.mean_accuracy) + "," +
               format_fixed(cell.report.mean_tokens_per_question) + "," +
               format_fixed(cell.report.tokens_per_turn) + "\n";
    }
    return csv;
}

// Full sweep: every plan stage crossed with every plan paradigm. With a
// non-empty out_dir, writes reports/<cell>.json, trajectories/<cell>.jsonl,
// and curves.csv underneath it.
inline std::vector<MatrixCell> run_matrix(const ScalingPlan& plan, const SkillTree& base,
                                          const std::vector<QuestionFixture>& fixtures,
                                          Policy& policy, const MatrixOptions& opts) {
    auto stages = plan_stages(plan, base, fixtures);
    std::vector<MatrixCell> cells;
    for (const auto& stage : stages)
        for (const auto& label : plan.paradigms)
            cells.push_back(run_cell(stage.label, stage.tree, parse_paradigm_spec(label),
                                     fixtures, policy, opts));

    if (!opts.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(fs::path(opts.out_dir) / "reports");
        fs::create_directories(fs::path(opts.out_dir) / "trajectories");
        for (const auto& cell : cells) {
            const std::string name =
                sanitize_label(cell.stage) + "_" + sanitize_label(cell.paradigm);
            write_text_file((fs::path(opts.out_dir) / "reports" / (name + ".json")).string(),
                            report_to_json(cell.report).dump(2) + "\n");
            std::string jsonl;
            for (const auto& record : cell.records) jsonl += record.to_json().dump() + "\n";
            write_text_file(
                (fs::path(opts.out_dir) / "trajectories" / (name + ".jsonl")).string(),
                jsonl);
        }
        write_text_file((fs::path(opts.out_dir) / "curves.csv").string(), curves_csv(cells));
    }
    return cells;
}

}  // namespace skilltree
