#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xrank::rules {

enum class Label {
  ObjectClass,
  ObjectColor,
  ObjectEnumeration,
  Action,
  Size,
  Details,
  SuccessfulAlternative,
};

inline constexpr std::array<Label, 7> kAllLabels = {
    Label::ObjectClass, Label::ObjectColor, Label::ObjectEnumeration,    Label::Action,
    Label::Size,        Label::Details,     Label::SuccessfulAlternative};

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view name);

/// One crowd judgement of a failure: disagreeing semantics (or "successful alternative") and a 1-10 rating.
struct HumanLabelRecord {
  std::string query_id;
  std::vector<Label> labels;  // sorted, unique
  int rating = 0;

  /// Throws Error(InvalidArgument) for empty or mixed successful_alternative labels or a rating outside 1-10.
  static HumanLabelRecord make(std::string query_id, std::vector<Label> labels, int rating);
  bool has(Label label) const;
};

/// CSV `query_id,labels,rating` with `;`-joined labels; an optional header row is skipped.
std::vector<HumanLabelRecord> read_labels(std::istream& in);
std::vector<HumanLabelRecord> read_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, std::span<const HumanLabelRecord> records);

struct LabelDistribution {
  std::map<Label, double> pct;  // every label present, 0 when unused
  double mean_rating = 0;
  std::size_t num_records = 0;
};

/// Throws Error(EmptyInput).
LabelDistribution label_distribution(std::span<const HumanLabelRecord> records);

struct Rule {
  Label antecedent;
  Label consequent;
  double pct;  // share of records with the antecedent that also carry the consequent
  std::size_t support;  // records carrying both

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Ordered label pairs A -> B (A != B) with pct >= min_support_pct, sorted by pct descending,
/// then by label order. Throws Error(InvalidArgument) unless 0 < min_support_pct <= 100.
std::vector<Rule> mine_rules(std::span<const HumanLabelRecord> records, double min_support_pct);

}  // namespace xrank::rules
