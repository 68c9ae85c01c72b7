#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xrank::text {

/// A word token: maximal run of characters that are neither whitespace nor ASCII punctuation.
struct Token {
  std::size_t offset;  // byte offset into the source text
  std::size_t length;
  std::string_view view(std::string_view source) const { return source.substr(offset, length); }
};

std::vector<Token> tokenize(std::string_view text);
std::size_t token_count(std::string_view text);

std::string to_lower(std::string_view s);

/// Re-cases `replacement` after `original`: ALL CAPS, Capitalized or lower.
std::string mirror_case(std::string_view original, std::string_view replacement);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace xrank::text
