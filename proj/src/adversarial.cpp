#include "xrank/adversarial.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "xrank/error.hpp"
#include "xrank/text.hpp"

namespace xrank::adversarial {

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::Antonym: return "antonym";
    case PerturbationKind::ColorAll: return "color-all";
    case PerturbationKind::ColorIn: return "color-in";
    case PerturbationKind::Size: return "size";
  }
  return "unknown";
}

PerturbationKind parse_kind(std::string_view name) {
  for (auto kind : {PerturbationKind::Antonym, PerturbationKind::ColorAll, PerturbationKind::ColorIn,
                    PerturbationKind::Size}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown perturbation kind '" + std::string(name) + "'");
}

namespace {

// Unbiased draw in [0, n); std distributions are not portable across standard libraries.
std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % bound);
}

std::vector<std::string> words_of(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& t : text::tokenize(s)) out.emplace_back(text::to_lower(t.view(s)));
  return out;
}

// Color names indexed by their word sequence, plus the longest name length.
struct ColorIndex {
  explicit ColorIndex(const ColorTable& table) {
    for (const auto& c : table.colors()) {
      auto words = words_of(c.name);
      if (words.empty()) continue;
      longest = std::max(longest, words.size());
      by_words.emplace(std::move(words), &c);
    }
  }

  std::map<std::vector<std::string>, const NamedColor*> by_words;
  std::size_t longest = 0;
};

struct Match {
  std::size_t first_token;
  std::size_t token_count;
  const NamedColor* color;
};

// Longest color name starting at token `i`; consecutive words must be separated by whitespace only.
std::optional<Match> match_color(std::string_view source, const std::vector<text::Token>& tokens, std::size_t i,
                                 const ColorIndex& index) {
  const std::size_t max_len = std::min(index.longest, tokens.size() - i);
  for (std::size_t len = max_len; len >= 1; --len) {
    bool contiguous = true;
    std::vector<std::string> key;
    for (std::size_t k = 0; k < len; ++k) {
      if (k > 0) {
        const auto& prev = tokens[i + k - 1];
        const auto gap = source.substr(prev.offset + prev.length, tokens[i + k].offset - prev.offset - prev.length);
        if (gap.find_first_not_of(" \t") != std::string_view::npos) {
          contiguous = false;
          break;
        }
      }
      key.push_back(text::to_lower(tokens[i + k].view(source)));
    }
    if (!contiguous) continue;
    if (const auto it = index.by_words.find(key); it != index.by_words.end()) {
      return Match{i, len, it->second};
    }
  }
  return std::nullopt;
}

std::uint64_t query_seed(std::uint64_t seed, std::string_view query_id) {
  return text::splitmix64(seed ^ text::fnv1a64(query_id));
}

bool single_word(std::string_view s) {
  const auto tokens = text::tokenize(s);
  return tokens.size() == 1 && tokens.front().length == s.size();
}

class Rewriter {
 public:
  explicit Rewriter(std::string_view source) : source_(source), tokens_(text::tokenize(source)) {}

  const std::vector<text::Token>& tokens() const { return tokens_; }

  // Replaces tokens [first, first + replacement words) word by word, mirroring case.
  void replace(std::size_t first, const std::vector<std::string>& replacement) {
    const auto& a = tokens_[first];
    const auto& b = tokens_[first + replacement.size() - 1];
    Substitution s;
    s.position = first;
    s.old_token = std::string(source_.substr(a.offset, b.offset + b.length - a.offset));
    std::string joined;
    for (std::size_t k = 0; k < replacement.size(); ++k) {
      const auto& tok = tokens_[first + k];
      std::string word = text::mirror_case(tok.view(source_), replacement[k]);
      edits_[first + k] = word;
      if (k > 0) {
        const auto& prev = tokens_[first + k - 1];
        joined += source_.substr(prev.offset + prev.length, tok.offset - prev.offset - prev.length);
      }
      joined += word;
    }
    s.new_token = std::move(joined);
    substitutions_.push_back(std::move(s));
  }

  bool changed() const { return !substitutions_.empty(); }

  PerturbedQuery finish(const QueryRecord& q) && {
    std::string out;
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const auto it = edits_.find(i);
      if (it == edits_.end()) continue;
      out += source_.substr(cursor, tokens_[i].offset - cursor);
      out += it->second;
      cursor = tokens_[i].offset + tokens_[i].length;
    }
    out += source_.substr(cursor);
    return PerturbedQuery{q.query_id, q.text, std::move(out), std::move(substitutions_)};
  }

 private:
  std::string_view source_;
  std::vector<text::Token> tokens_;
  std::map<std::size_t, std::string> edits_;
  std::vector<Substitution> substitutions_;
};

void perturb_size(Rewriter& rw, std::string_view source, std::mt19937_64& rng) {
  auto in = [](std::span<const std::string_view> list, const std::string& w) {
    return std::find(list.begin(), list.end(), w) != list.end();
  };
  for (std::size_t i = 0; i < rw.tokens().size(); ++i) {
    const std::string w = text::to_lower(rw.tokens()[i].view(source));
    std::span<const std::string_view> pool;
    if (in(kLargeWords, w)) {
      pool = kSmallWords;
    } else if (in(kSmallWords, w)) {
      pool = kLargeWords;
    } else {
      continue;
    }
    rw.replace(i, {std::string(pool[pick(rng, pool.size())])});
  }
}

void perturb_antonym(Rewriter& rw, std::string_view source, const wordnet::SynsetGraph& graph,
                     std::mt19937_64& rng) {
  for (std::size_t i = 0; i < rw.tokens().size(); ++i) {
    const auto& antonyms = graph.antonyms_of(rw.tokens()[i].view(source));
    std::vector<std::string> pool;
    for (const auto& a : antonyms) {
      if (single_word(a)) pool.push_back(a);
    }
    if (pool.empty()) continue;
    rw.replace(i, {pool[pick(rng, pool.size())]});
  }
}

void perturb_color(Rewriter& rw, std::string_view source, const PerturbationSpec& spec, const ColorTable& colors,
                   const ColorIndex& index, std::mt19937_64& rng) {
  const auto& tokens = rw.tokens();
  for (std::size_t i = 0; i < tokens.size();) {
    const auto m = match_color(source, tokens, i, index);
    if (!m) {
      ++i;
      continue;
    }
    std::vector<const NamedColor*> pool;
    for (const auto& c : colors.colors()) {
      if (spec.kind == PerturbationKind::ColorIn && !spec.dataset_colors.contains(c.name)) continue;
      if (words_of(c.name).size() != m->token_count) continue;
      if (rgb_distance(c, *m->color) >= spec.color_distance_threshold) pool.push_back(&c);
    }
    if (pool.empty()) {
      throw Error(ErrorKind::NoDistantColor, "no color at distance >= " +
                                                 std::to_string(spec.color_distance_threshold) + " from '" +
                                                 m->color->name + "'");
    }
    rw.replace(i, words_of(pool[pick(rng, pool.size())]->name));
    i += m->token_count;
  }
}

}  // namespace

std::optional<PerturbedQuery> perturb(const QueryRecord& query, const PerturbationSpec& spec,
                                      const wordnet::SynsetGraph& graph, const ColorTable& colors) {
  const bool color_kind = spec.kind == PerturbationKind::ColorAll || spec.kind == PerturbationKind::ColorIn;
  if (color_kind && !(spec.color_distance_threshold > 0)) {
    throw Error(ErrorKind::InvalidArgument, "color distance threshold must be positive");
  }
  std::mt19937_64 rng(query_seed(spec.rng_seed, query.query_id));
  Rewriter rw(query.text);
  switch (spec.kind) {
    case PerturbationKind::Size:
      perturb_size(rw, query.text, rng);
      break;
    case PerturbationKind::Antonym:
      perturb_antonym(rw, query.text, graph, rng);
      break;
    case PerturbationKind::ColorAll:
    case PerturbationKind::ColorIn:
      perturb_color(rw, query.text, spec, colors, ColorIndex(colors), rng);
      break;
  }
  if (!rw.changed()) return std::nullopt;
  return std::move(rw).finish(query);
}

std::vector<PerturbedQuery> perturb_all(std::span<const QueryRecord> queries, const PerturbationSpec& spec,
                                        const wordnet::SynsetGraph& graph, const ColorTable& colors) {
  std::vector<PerturbedQuery> out;
  for (const auto& q : queries) {
    if (auto p = perturb(q, spec, graph, colors)) out.push_back(std::move(*p));
  }
  return out;
}

double applicability_stats(std::span<const QueryRecord> queries, const PerturbationSpec& spec,
                           const wordnet::SynsetGraph& graph, const ColorTable& colors) {
  if (queries.empty()) return 0.0;
  return static_cast<double>(perturb_all(queries, spec, graph, colors).size()) /
         static_cast<double>(queries.size());
}

std::set<std::string> colors_mentioned(std::span<const std::string> texts, const ColorTable& colors) {
  const ColorIndex index(colors);
  std::set<std::string> out;
  for (const auto& t : texts) {
    const auto tokens = text::tokenize(t);
    for (std::size_t i = 0; i < tokens.size();) {
      if (const auto m = match_color(t, tokens, i, index)) {
        out.insert(m->color->name);
        i += m->token_count;
      } else {
        ++i;
      }
    }
  }
  return out;
}

RerankDelta rerank_delta(std::span<const ranker::RankResult> original,
                         std::span<const ranker::RankResult> adversarial,
                         const std::set<std::string>& changed_ids) {
  std::map<std::string_view, std::size_t> before, after;
  for (const auto& r : original) before.emplace(r.query_id, r.gt_rank);
  for (const auto& r : adversarial) after.emplace(r.query_id, r.gt_rank);
  std::size_t lower = 0, higher = 0, same = 0;
  for (const auto& id : changed_ids) {
    const auto b = before.find(id);
    const auto a = after.find(id);
    if (b == before.end() || a == after.end()) throw Error(ErrorKind::MissingQuery, id);
    if (a->second > b->second) {
      ++lower;
    } else if (a->second < b->second) {
      ++higher;
    } else {
      ++same;
    }
  }
  RerankDelta d;
  d.n_perturbed = changed_ids.size();
  if (d.n_perturbed > 0) {
    const double n = static_cast<double>(d.n_perturbed);
    d.lower_pct = 100.0 * static_cast<double>(lower) / n;
    d.higher_pct = 100.0 * static_cast<double>(higher) / n;
    d.same_pct = 100.0 * static_cast<double>(same) / n;
  }
  return d;
}

std::set<std::string> changed_query_ids(const EmbeddingMatrix& original, const EmbeddingMatrix& adversarial) {
  std::set<std::string> out;
  for (std::size_t r = 0; r < adversarial.rows(); ++r) {
    const std::string& id = adversarial.ids()[r];
    const std::size_t o = original.find(id);
    if (o == original.rows()) throw Error(ErrorKind::MissingQuery, id);
    if (ranker::cosine_similarity(original.row(o), adversarial.row(r)) < 1.0 - 1e-12) out.insert(id);
  }
  return out;
}

EmbeddingMatrix overlay_embeddings(const EmbeddingMatrix& original, const EmbeddingMatrix& adversarial) {
  if (adversarial.rows() > 0 && adversarial.dim() != original.dim()) {
    throw Error(ErrorKind::DimMismatch, "adversarial embeddings have a different dim");
  }
  std::vector<double> values = original.values();
  for (std::size_t r = 0; r < adversarial.rows(); ++r) {
    const std::size_t o = original.find(adversarial.ids()[r]);
    if (o == original.rows()) throw Error(ErrorKind::MissingQuery, adversarial.ids()[r]);
    const auto row = adversarial.row(r);
    std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(o * original.dim()));
  }
  return EmbeddingMatrix(original.ids(), original.dim(), std::move(values));
}

}  // namespace xrank::adversarial
