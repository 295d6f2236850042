#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rauzy {

enum class LabelId : std::uint32_t {};

constexpr std::size_t index(LabelId id) { return static_cast<std::size_t>(id); }
constexpr LabelId label_at(std::size_t i) { return static_cast<LabelId>(i); }

enum class Row : std::uint8_t { top, bottom };

constexpr Row opposite(Row r) { return r == Row::top ? Row::bottom : Row::top; }
std::string_view to_string(Row r);
Row parse_row(std::string_view text);

// Ordered set of branch labels. Order is the canonical one: first occurrence
// reading the top row left to right, then the bottom row.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& name(LabelId id) const { return labels_.at(index(id)); }
  const std::vector<std::string>& names() const { return labels_; }
  // Throws AlphabetMismatchError for unknown labels.
  LabelId id(std::string_view name) const;
  bool contains(std::string_view name) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, LabelId> lookup_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// Two rows of branch labels, every label occurring exactly twice in total:
// the combinatorics of a single-switch track. Immutable.
class Exchange {
 public:
  // Validates and assigns a canonical alphabet.
  static Exchange from_labels(const std::vector<std::string>& top, const std::vector<std::string>& bottom);

  // Accepts "a a b | b c c" and "top: a a b | bottom: b c c".
  static Exchange parse(std::string_view text);

  // Rows over an existing alphabet; used when a move rearranges labels.
  Exchange(AlphabetPtr alphabet, std::vector<LabelId> top, std::vector<LabelId> bottom);

  const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
  const Alphabet& alphabet() const { return *alphabet_; }
  std::size_t size() const { return alphabet_->size(); }

  std::span<const LabelId> row(Row r) const { return r == Row::top ? top_ : bottom_; }
  std::span<const LabelId> top() const { return top_; }
  std::span<const LabelId> bottom() const { return bottom_; }

  // True when every label occurs once per row (an interval exchange).
  bool is_classical() const { return classical_; }

  // Occurrences on top minus occurrences on bottom, indexed by label. The
  // weights are carried iff the dot product with these vanishes.
  const std::vector<int>& switch_coefficients() const { return coefficients_; }

  std::string to_string() const;

  friend bool operator==(const Exchange& a, const Exchange& b);

 private:
  AlphabetPtr alphabet_;
  std::vector<LabelId> top_;
  std::vector<LabelId> bottom_;
  std::vector<int> coefficients_;
  bool classical_ = true;
};

}  // namespace rauzy
