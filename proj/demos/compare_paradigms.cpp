// Replays one question with the oracle policy under each paradigm and prints
// the context-cost comparison that motivates progressive disclosure.
//
//   ./compare_paradigms [manifest.json] [fixture.json]

#include <iostream>
#include <string>
#include <vector>

#include <skilltree/engine.hpp>
#include <skilltree/metrics.hpp>
#include <skilltree/policy.hpp>
#include <skilltree/registry.hpp>
#include <skilltree/retrieval.hpp>
#include <skilltree/runner.hpp>

using namespace skilltree;

int main(int argc, char** argv) {
    const std::string manifest = argc > 1 ? argv[1] : "data/reference_tree.json";
    const std::string fixture_path = argc > 2 ? argv[2] : "data/fixtures/case_f1.json";
    try {
        SkillTree tree = load_manifest(manifest);
        QuestionFixture fixture = load_fixture(fixture_path);
        std::cout << "question: " << fixture.question_id << "\n";
        std::cout << "library: " << tree.tools.size() << " tools in " << tree.nodes.size()
                  << " kits\n\n";

        ToolIndex index = build_index(tree, EmbeddingConfig{});
        OraclePolicy policy;
        std::vector<std::pair<std::string, RunReport>> results;
        double flat_tokens = 0.0;
        for (Paradigm paradigm : {Paradigm::flat(), Paradigm::rag(), Paradigm::two_layers(),
                                  Paradigm::active()}) {
            EpisodeConfig cfg;
            cfg.paradigm = paradigm;
            if (paradigm.kind == ParadigmKind::Rag)
                cfg.retrieved =
                    retrieve(index, fixture.query, paradigm.rag_k, paradigm.rag_forced);
            auto record = run_episode(fixture, tree, policy, cfg);
            auto report = aggregate({score_question(record, fixture)});
            if (paradigm.kind == ParadigmKind::Flat)
                flat_tokens = report.mean_tokens_per_question;
            results.emplace_back(paradigm.label(), report);
        }

        std::cout << "paradigm   accuracy  turns  tokens/question  tokens/turn  saved vs flat\n";
        for (const auto& [label, report] : results) {
            double saved = flat_tokens > 0.0
                               ? compression_ratio(flat_tokens, report.mean_tokens_per_question)
                               : 0.0;
            std::printf("%-10s %8.3f %6lld %16.1f %12.1f %13.1f%%\n", label.c_str(),
                        report.mean_accuracy,
                        static_cast<long long>(report.total_turns),
                        report.mean_tokens_per_question, report.tokens_per_turn,
                        100.0 * saved);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
