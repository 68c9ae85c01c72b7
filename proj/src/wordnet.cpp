#include "xrank/wordnet.hpp"

#include <deque>

#include "xrank/error.hpp"
#include "xrank/text.hpp"

namespace xrank::wordnet {

struct SynsetGraph::Cache {
  using Key = std::uint64_t;
  using Entry = std::pair<Key, std::optional<std::size_t>>;

  explicit Cache(std::size_t cap) : capacity(cap) {}

  static Key key(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<Key>(a) << 32) | static_cast<Key>(b);
  }

  bool lookup(Key k, std::optional<std::size_t>& out) {
    std::lock_guard lock(mutex);
    const auto it = map.find(k);
    if (it == map.end()) return false;
    order.splice(order.begin(), order, it->second);
    out = it->second->second;
    return true;
  }

  void insert(Key k, std::optional<std::size_t> value) {
    if (capacity == 0) return;
    std::lock_guard lock(mutex);
    if (map.contains(k)) return;
    order.emplace_front(k, value);
    map.emplace(k, order.begin());
    if (map.size() > capacity) {
      map.erase(order.back().first);
      order.pop_back();
    }
  }

  void clear() {
    std::lock_guard lock(mutex);
    order.clear();
    map.clear();
  }

  std::size_t capacity;
  std::mutex mutex;
  std::list<Entry> order;
  std::unordered_map<Key, std::list<Entry>::iterator> map;
};

SynsetGraph::SynsetGraph(std::size_t cache_capacity) : cache_(std::make_unique<Cache>(cache_capacity)) {}
SynsetGraph::SynsetGraph(SynsetGraph&&) noexcept = default;
SynsetGraph& SynsetGraph::operator=(SynsetGraph&&) noexcept = default;
SynsetGraph::~SynsetGraph() = default;

bool SynsetGraph::add_node(const SynsetId& synset) {
  const auto [it, inserted] = index_.emplace(synset.str(), names_.size());
  if (!inserted) return false;
  names_.push_back(synset);
  adjacency_.emplace_back();
  return true;
}

void SynsetGraph::add_hypernym(const SynsetId& child, const SynsetId& parent) {
  const std::size_t c = index_of(child);
  const std::size_t p = index_of(parent);
  if (c == p) throw Error(ErrorKind::InvalidArgument, "self-loop on " + child.str());
  edges_.emplace_back(c, p);
  adjacency_[c].push_back(p);
  adjacency_[p].push_back(c);
  cache_->clear();
}

void SynsetGraph::add_antonym(std::string_view lemma, std::string_view antonym) {
  const std::string a = text::to_lower(lemma);
  const std::string b = text::to_lower(antonym);
  if (a.empty() || b.empty() || a == b) {
    throw Error(ErrorKind::InvalidArgument, "bad antonym pair '" + a + "'/'" + b + "'");
  }
  antonyms_[a].insert(b);
  antonyms_[b].insert(a);
}

bool SynsetGraph::contains(const SynsetId& synset) const { return index_.contains(synset.str()); }

std::size_t SynsetGraph::index_of(const SynsetId& synset) const {
  const auto it = index_.find(synset.str());
  if (it == index_.end()) throw Error(ErrorKind::UnknownSynset, synset.str());
  return it->second;
}

std::optional<std::size_t> SynsetGraph::bfs(std::size_t from, std::size_t to) const {
  if (from == to) return 0;
  std::vector<std::size_t> dist(names_.size(), SIZE_MAX);
  std::deque<std::size_t> frontier{from};
  dist[from] = 0;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (std::size_t v : adjacency_[u]) {
      if (dist[v] != SIZE_MAX) continue;
      dist[v] = dist[u] + 1;
      if (v == to) return dist[v];
      frontier.push_back(v);
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> SynsetGraph::distance(const SynsetId& a, const SynsetId& b) const {
  const std::size_t ia = index_of(a);
  const std::size_t ib = index_of(b);
  const auto key = Cache::key(ia, ib);
  std::optional<std::size_t> d;
  if (cache_->lookup(key, d)) return d;
  d = bfs(ia, ib);
  cache_->insert(key, d);
  return d;
}

std::optional<double> SynsetGraph::path_similarity(const SynsetId& a, const SynsetId& b) const {
  const auto d = distance(a, b);
  if (!d) return std::nullopt;
  return 1.0 / (1.0 + static_cast<double>(*d));
}

const std::set<std::string>& SynsetGraph::antonyms_of(std::string_view lemma) const {
  static const std::set<std::string> kEmpty;
  const auto it = antonyms_.find(text::to_lower(lemma));
  return it == antonyms_.end() ? kEmpty : it->second;
}

}  // namespace xrank::wordnet
