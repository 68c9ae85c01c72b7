#include "xrank/text.hpp"

#include <algorithm>
#include <cctype>

namespace xrank::text {

namespace {

bool is_separator(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isspace(u) || (u < 0x80 && std::ispunct(u));
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_separator(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !is_separator(text[i])) ++i;
    tokens.push_back(Token{start, i - start});
  }
  return tokens;
}

std::size_t token_count(std::string_view text) { return tokenize(text).size(); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string mirror_case(std::string_view original, std::string_view replacement) {
  std::string out = to_lower(replacement);
  const bool has_alpha = std::any_of(original.begin(), original.end(),
                                     [](unsigned char c) { return std::isalpha(c); });
  if (!has_alpha || out.empty()) return out;
  const bool all_upper = std::none_of(original.begin(), original.end(),
                                      [](unsigned char c) { return std::islower(c); });
  if (all_upper && original.size() > 1) {
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  } else if (std::isupper(static_cast<unsigned char>(original.front()))) {
    out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace xrank::text
