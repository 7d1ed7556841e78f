#pragma once

// Command implementations behind the CLI binary: validate / run / eval /
// scale. Each returns a process exit code; `guarded` maps thrown errors onto
// the documented codes (1 = config/parse/IO, 2 = library validation).

#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "skilltree/engine.hpp"
#include "skilltree/errors.hpp"
#include "skilltree/harness.hpp"
#include "skilltree/metrics.hpp"
#include "skilltree/policy.hpp"
#include "skilltree/registry.hpp"
#include "skilltree/remote.hpp"
#include "skilltree/retrieval.hpp"
#include "skilltree/runner.hpp"

namespace skilltree {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;      // parse/config/IO problems
constexpr int kExitInvalid = 2;     // library fails validation
constexpr int kExitEpisodes = 3;    // run finished but some episodes errored

// Runs a command body, translating exceptions to exit codes.
inline int guarded(const std::function<int()>& body, std::ostream& err = std::cerr) {
    try {
        return body();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

// ------------------------------------------------------------------ validate

inline int cmd_validate(const std::string& manifest_path, std::ostream& out) {
    SkillTree tree = load_manifest(manifest_path);
    out << tree.nodes.size() << " kits, " << tree.tools.size() << " tools\n";
    return kExitOk;
}

// ----------------------------------------------------------------- policies

inline std::unique_ptr<Policy> make_policy(const std::string& spec) {
    if (spec == "oracle") return std::make_unique<OraclePolicy>();
    if (spec.rfind("scripted:", 0) == 0)
        return std::make_unique<ScriptedPolicy>(load_script(spec.substr(9)));
    if (spec == "remote")
        return std::make_unique<RemoteLlmPolicy>(RemoteLlmConfig{});
    if (spec.rfind("remote:", 0) == 0)
        return std::make_unique<RemoteLlmPolicy>(
            parse_remote_config(read_json_file(spec.substr(7))));
    throw ConfigError("unknown policy: " + spec);
}

inline ExactMatchDenominator denominator_from_string(const std::string& s) {
    if (s == "gt") return ExactMatchDenominator::Gt;
    if (s == "minlen") return ExactMatchDenominator::MinLen;
    throw ConfigError("unknown exact-match denominator: " + s);
}

// --------------------------------------------------------------------- run

struct RunConfig {
    std::string manifest;
    std::string fixtures;
    std::string paradigm = "active";
    std::string policy = "oracle";
    std::string out_dir;             // empty -> print only
    int max_turns = 32;
    int rag_k = 19;
    std::vector<std::string> rag_forced = {"get_filelist"};
    std::string tokenizer = "builtin";  // or "provider"
    std::uint64_t seed = 0;
    int jobs = 1;
    bool embed = false;              // rag needs the embedding index
    std::string tem_denominator = "gt";
};

inline void print_report(const RunReport& r, std::ostream& out) {
    out << "questions: " << r.rows.size() << "\n";
    out << "accuracy: " << format_fixed(r.mean_accuracy) << "\n";
    out << "efficiency: "
        << (r.mean_efficiency ? format_fixed(*r.mean_efficiency) : std::string("n/a"))
        << "\n";
    out << "tool_any_order: " << format_fixed(r.mean_tao) << "\n";
    out << "tool_in_order: " << format_fixed(r.mean_tio) << "\n";
    out << "tool_exact_match: " << format_fixed(r.mean_tem) << "\n";
    out << "parameters: " << format_fixed(r.mean_params) << "\n";
    out << "tokens_per_question: " << format_fixed(r.mean_tokens_per_question) << "\n";
    out << "tokens_per_turn: " << format_fixed(r.tokens_per_turn) << "\n";
    out << "total_tokens: " << r.total_tokens << "\n";
}

inline void write_run_outputs(const std::string& out_dir,
                              const std::vector<TrajectoryRecord>& records,
                              const RunReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::string jsonl;
    for (const auto& rec : records) jsonl += rec.to_json().dump() + "\n";
    write_text_file((fs::path(out_dir) / "trajectories.jsonl").string(), jsonl);
    write_text_file((fs::path(out_dir) / "report.json").string(),
                    report_to_json(report).dump(2) + "\n");
    write_text_file((fs::path(out_dir) / "report.csv").string(), report_to_csv(report));
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out) {
    SkillTree tree = load_manifest(cfg.manifest);
    auto fixtures = load_fixtures(cfg.fixtures);
    if (fixtures.empty()) throw ConfigError("no fixtures found at " + cfg.fixtures);

    std::string paradigm_text = cfg.paradigm;
    if (paradigm_text == "random")
        paradigm_text += ":" + std::to_string(cfg.seed);
    ParadigmSpec spec = parse_paradigm_spec(paradigm_text);
    spec.paradigm.rag_k = cfg.rag_k;
    spec.paradigm.rag_forced = cfg.rag_forced;
    if (spec.regroup_seed) tree = random_regroup(tree, *spec.regroup_seed);

    std::optional<ToolIndex> index;
    if (spec.paradigm.kind == ParadigmKind::Rag) {
        if (!cfg.embed)
            throw ConfigError("rag paradigm needs --embed to build the retrieval index");
        index = build_index(tree, EmbeddingConfig{});
    }

    auto policy = make_policy(cfg.policy);
    const bool provider_tokens = cfg.tokenizer == "provider";
    if (!provider_tokens && cfg.tokenizer != "builtin")
        throw ConfigError("unknown tokenizer: " + cfg.tokenizer);

    std::vector<TrajectoryRecord> records(fixtures.size());
    auto run_one = [&](std::size_t i) {
        const auto& fixture = fixtures[i];
        EpisodeConfig ep;
        ep.paradigm = spec.paradigm;
        ep.limits.max_turns = cfg.max_turns;
        ep.provider_tokens = provider_tokens;
        ep.paradigm_label = spec.label;
        if (index)
            ep.retrieved = retrieve(*index, fixture.query, spec.paradigm.rag_k,
                                    spec.paradigm.rag_forced);
        try {
            records[i] = run_episode(fixture, tree, *policy, ep);
        } catch (const std::exception& e) {
            records[i].question_id = fixture.question_id;
            records[i].paradigm = spec.label;
            records[i].error = e.what();
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || fixtures.size() < 2) {
        for (std::size_t i = 0; i < fixtures.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), fixtures.size());
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < records.size();
                     i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& t : pool) t.join();
    }

    ScoreOptions scoring{denominator_from_string(cfg.tem_denominator)};
    std::vector<QuestionScore> rows;
    rows.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        rows.push_back(score_question(records[i], fixtures[i], scoring));
    RunReport report = aggregate(std::move(rows));

    if (!cfg.out_dir.empty()) write_run_outputs(cfg.out_dir, records, report);
    print_report(report, out);

    std::size_t failed = 0;
    for (const auto& rec : records)
        if (rec.error) ++failed;
    if (failed > 0) {
        out << "episodes_with_errors: " << failed << "\n";
        return kExitEpisodes;
    }
    return kExitOk;
}

// --------------------------------------------------------------------- eval

struct EvalConfig {
    std::string trajectories;  // JSONL from a previous run
    std::string fixtures;
    std::string out_dir;       // empty -> print only
    std::string tem_denominator = "gt";
};

inline int cmd_eval(const EvalConfig& cfg, std::ostream& out) {
    auto fixtures = load_fixtures(cfg.fixtures);
    std::unordered_map<std::string, const QuestionFixture*> by_id;
    for (const auto& f : fixtures) by_id[f.question_id] = &f;

    std::ifstream in(cfg.trajectories);
    if (!in) throw ConfigError("cannot open trajectories: " + cfg.trajectories);
    ScoreOptions scoring{denominator_from_string(cfg.tem_denominator)};
    std::vector<QuestionScore> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim_copy(line).empty()) continue;
        TrajectoryRecord record;
        try {
            record = TrajectoryRecord::from_json(json::parse(line));
        } catch (const json::exception& e) {
            throw ParseError("bad trajectory line " + std::to_string(line_no) + ": " +
                             e.what());
        }
        auto it = by_id.find(record.question_id);
        if (it == by_id.end()) {
            // Score what we can; a stray row should not sink the whole file.
            std::cerr << "warning: line " << line_no << " references unknown question "
                      << record.question_id << ", skipped\n";
            continue;
        }
        rows.push_back(score_question(record, *it->second, scoring));
    }
    RunReport report = aggregate(std::move(rows));

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_text_file((std::filesystem::path(cfg.out_dir) / "report.json").string(),
                        report_to_json(report).dump(2) + "\n");
        write_text_file((std::filesystem::path(cfg.out_dir) / "report.csv").string(),
                        report_to_csv(report));
    }
    print_report(report, out);
    return kExitOk;
}

// -------------------------------------------------------------------- scale

struct ScaleConfig {
    std::string plan;
    std::string manifest;
    std::string fixtures;
    std::string out_dir;  // empty -> print only
    int max_turns = 32;
    std::string tem_denominator = "gt";
};

inline int cmd_scale(const ScaleConfig& cfg, std::ostream& out) {
    ScalingPlan plan = load_scaling_plan(cfg.plan);
    SkillTree base = load_manifest(cfg.manifest);
    auto fixtures = load_fixtures(cfg.fixtures);
    if (fixtures.empty()) throw ConfigError("no fixtures found at " + cfg.fixtures);

    OraclePolicy policy;
    MatrixOptions opts;
    opts.limits.max_turns = cfg.max_turns;
    opts.scoring.denominator = denominator_from_string(cfg.tem_denominator);
    opts.out_dir = cfg.out_dir;
    auto cells = run_matrix(plan, base, fixtures, policy, opts);
    out << curves_csv(cells);
    return kExitOk;
}

}  // namespace skilltree
