#pragma once

// Retrieval baseline support: a deterministic hashed bag-of-words embedding,
// an exhaustive cosine index over the tool library, and top-k selection with
// force-included tools. Forced tools are kept out of the ranked candidate
// pool and appended afterwards, so the result size is always
// min(k, |T \ forced|) + |forced|.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "skilltree/errors.hpp"
#include "skilltree/registry.hpp"

namespace skilltree {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Lowercased alphanumeric word counts hashed into a fixed-dimension vector,
// L2-normalized. Identical text always embeds identically.
inline std::vector<float> embed_text(std::string_view text, int dim) {
    if (dim < 16) throw ConfigError("embedding dimension must be at least 16");
    std::vector<float> v(static_cast<std::size_t>(dim), 0.0f);
    std::string word;
    auto flush = [&] {
        if (word.empty()) return;
        v[fnv1a64(word) % static_cast<std::uint64_t>(dim)] += 1.0f;
        word.clear();
    };
    for (char raw : text) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (std::isalnum(c))
            word += static_cast<char>(std::tolower(c));
        else
            flush();
    }
    flush();
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    if (norm > 0.0) {
        float inv = static_cast<float>(1.0 / std::sqrt(norm));
        for (float& x : v) x *= inv;
    }
    return v;
}

struct EmbeddingConfig {
    int dim = 256;
    bool briefs_only = false;  // default embeds brief + document
};

struct ToolIndex {
    int dim = 0;
    std::vector<std::string> names;  // manifest order
    std::vector<std::vector<float>> vectors;
};

inline ToolIndex build_index(const SkillTree& tree, const EmbeddingConfig& cfg = {}) {
    ToolIndex index;
    index.dim = cfg.dim;
    for (const auto& t : tree.tools) {
        std::string text = cfg.briefs_only ? t.brief : t.brief + "\n" + t.document;
        index.names.push_back(t.name);
        index.vectors.push_back(embed_text(text, cfg.dim));
    }
    return index;
}

inline float dot(const std::vector<float>& a, const std::vector<float>& b) {
    float s = 0.0f;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Top-k by cosine similarity (descending), ties broken by manifest order, then
// the forced names in their given order. k = 0 with forced tools is legal.
inline std::vector<std::string> retrieve(const ToolIndex& index, std::string_view query,
                                         int k, const std::vector<std::string>& forced) {
    if (k < 0) throw ConfigError("retrieval k must be non-negative");
    std::set<std::string> forced_set;
    for (const auto& f : forced) {
        if (std::find(index.names.begin(), index.names.end(), f) == index.names.end())
            throw ConfigError("forced tool \"" + f + "\" not in library");
        if (!forced_set.insert(f).second)
            throw ConfigError("forced tool \"" + f + "\" listed twice");
    }
    std::vector<float> qv = embed_text(query, index.dim);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < index.names.size(); ++i)
        if (!forced_set.count(index.names[i])) candidates.push_back(i);
    std::vector<float> scores(index.names.size(), 0.0f);
    for (std::size_t i : candidates) scores[i] = dot(qv, index.vectors[i]);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < take; ++i) out.push_back(index.names[candidates[i]]);
    for (const auto& f : forced) out.push_back(f);
    return out;
}

}  // namespace skilltree
