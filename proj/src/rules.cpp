#include "xrank/rules.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "xrank/error.hpp"
#include "xrank/ingest.hpp"

namespace xrank::rules {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::ObjectClass: return "object_class";
    case Label::ObjectColor: return "object_color";
    case Label::ObjectEnumeration: return "object_enumeration";
    case Label::Action: return "action";
    case Label::Size: return "size";
    case Label::Details: return "details";
    case Label::SuccessfulAlternative: return "successful_alternative";
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view name) {
  for (Label l : kAllLabels) {
    if (name == to_string(l)) return l;
  }
  return std::nullopt;
}

HumanLabelRecord HumanLabelRecord::make(std::string query_id, std::vector<Label> labels, int rating) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (query_id.empty()) throw Error(ErrorKind::InvalidArgument, "label record needs a query id");
  if (labels.empty()) throw Error(ErrorKind::InvalidArgument, "label record '" + query_id + "' has no labels");
  const bool alternative =
      std::find(labels.begin(), labels.end(), Label::SuccessfulAlternative) != labels.end();
  if (alternative && labels.size() > 1) {
    throw Error(ErrorKind::InvalidArgument,
                "record '" + query_id + "': successful_alternative excludes other labels");
  }
  if (rating < 1 || rating > 10) {
    throw Error(ErrorKind::InvalidArgument, "record '" + query_id + "': rating must be in 1-10");
  }
  return HumanLabelRecord{std::move(query_id), std::move(labels), rating};
}

bool HumanLabelRecord::has(Label label) const {
  return std::binary_search(labels.begin(), labels.end(), label);
}

std::vector<HumanLabelRecord> read_labels(std::istream& in) {
  std::vector<HumanLabelRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line_no == 1 && line == "query_id,labels,rating") continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 3) throw ParseError(line_no, "expected query_id,labels,rating");
    std::vector<Label> labels;
    std::stringstream ls(cells[1]);
    for (std::string name; std::getline(ls, name, ';');) {
      const auto l = parse_label(name);
      if (!l) throw ParseError(line_no, "unknown label '" + name + "'");
      labels.push_back(*l);
    }
    int rating = 0;
    const auto& r = cells[2];
    const auto [ptr, ec] = std::from_chars(r.data(), r.data() + r.size(), rating);
    if (ec != std::errc() || ptr != r.data() + r.size()) throw ParseError(line_no, "rating must be an integer");
    try {
      out.push_back(HumanLabelRecord::make(cells[0], std::move(labels), rating));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

std::vector<HumanLabelRecord> read_labels(const std::filesystem::path& path) {
  auto in = ingest::open_input(path);
  return read_labels(in);
}

void write_labels(std::ostream& out, std::span<const HumanLabelRecord> records) {
  out << "query_id,labels,rating\n";
  for (const auto& r : records) {
    out << r.query_id << ',';
    for (std::size_t i = 0; i < r.labels.size(); ++i) out << (i ? ";" : "") << to_string(r.labels[i]);
    out << ',' << r.rating << '\n';
  }
}

LabelDistribution label_distribution(std::span<const HumanLabelRecord> records) {
  if (records.empty()) throw Error(ErrorKind::EmptyInput, "no label records");
  LabelDistribution d;
  d.num_records = records.size();
  const double n = static_cast<double>(records.size());
  double rating_sum = 0;
  for (Label l : kAllLabels) {
    const auto count = std::count_if(records.begin(), records.end(), [l](const auto& r) { return r.has(l); });
    d.pct[l] = 100.0 * static_cast<double>(count) / n;
  }
  for (const auto& r : records) rating_sum += r.rating;
  d.mean_rating = rating_sum / n;
  return d;
}

std::vector<Rule> mine_rules(std::span<const HumanLabelRecord> records, double min_support_pct) {
  if (!(min_support_pct > 0) || min_support_pct > 100) {
    throw Error(ErrorKind::InvalidArgument, "min_support_pct must be in (0, 100]");
  }
  std::vector<Rule> rules;
  for (Label a : kAllLabels) {
    std::size_t with_a = 0;
    for (const auto& r : records) with_a += r.has(a) ? 1 : 0;
    if (with_a == 0) continue;
    for (Label b : kAllLabels) {
      if (a == b) continue;
      std::size_t both = 0;
      for (const auto& r : records) both += (r.has(a) && r.has(b)) ? 1 : 0;
      const double pct = 100.0 * static_cast<double>(both) / static_cast<double>(with_a);
      if (both > 0 && pct >= min_support_pct) rules.push_back(Rule{a, b, pct, both});
    }
  }
  std::stable_sort(rules.begin(), rules.end(), [](const Rule& x, const Rule& y) { return x.pct > y.pct; });
  return rules;
}

}  // namespace xrank::rules
