#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace skilltree {

// Pluggable token counter. The builtin approximation charges one token per
// four bytes, rounded up; remote runs may substitute provider-reported counts.
using Tokenizer = std::function<std::int64_t(std::string_view)>;

inline std::int64_t builtin_token_count(std::string_view text) {
    return static_cast<std::int64_t>((text.size() + 3) / 4);
}

inline Tokenizer builtin_tokenizer() {
    return [](std::string_view text) { return builtin_token_count(text); };
}

}  // namespace skilltree
