#include "rauzy/exchange.hpp"

#include "rauzy/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rauzy {

std::string_view to_string(Row r) { return r == Row::top ? "top" : "bottom"; }

Row parse_row(std::string_view text) {
  if (text == "top") return Row::top;
  if (text == "bottom") return Row::bottom;
  throw ParseError("unknown row '" + std::string(text) + "'");
}

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!lookup_.emplace(labels_[i], label_at(i)).second) {
      throw LabelCountError("duplicate alphabet label '" + labels_[i] + "'");
    }
  }
}

LabelId Alphabet::id(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) throw AlphabetMismatchError("label '" + std::string(name) + "' is not in the alphabet");
  return it->second;
}

bool Alphabet::contains(std::string_view name) const { return lookup_.count(std::string(name)) != 0; }

Exchange Exchange::from_labels(const std::vector<std::string>& top, const std::vector<std::string>& bottom) {
  if (top.empty() || bottom.empty()) throw EmptyRowError("exchange rows must be nonempty");
  std::vector<std::string> order;
  for (const auto* row : {&top, &bottom}) {
    for (const auto& l : *row) {
      if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
    }
  }
  auto alphabet = std::make_shared<const Alphabet>(order);
  std::vector<LabelId> t, b;
  t.reserve(top.size());
  b.reserve(bottom.size());
  for (const auto& l : top) t.push_back(alphabet->id(l));
  for (const auto& l : bottom) b.push_back(alphabet->id(l));
  return Exchange(std::move(alphabet), std::move(t), std::move(b));
}

namespace {

bool valid_label(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<std::string> split_row(std::string_view text, std::string_view prefix) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  std::string tok;
  bool first = true;
  while (in >> tok) {
    if (first && tok == prefix) {
      first = false;
      continue;
    }
    first = false;
    if (!valid_label(tok)) throw ParseError("invalid label '" + tok + "'");
    out.push_back(tok);
  }
  return out;
}

}  // namespace

Exchange Exchange::parse(std::string_view text) {
  auto bar = text.find('|');
  if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos) {
    throw ParseError("exchange must have exactly one '|' separating the rows");
  }
  auto top = split_row(text.substr(0, bar), "top:");
  auto bottom = split_row(text.substr(bar + 1), "bottom:");
  return from_labels(top, bottom);
}

Exchange::Exchange(AlphabetPtr alphabet, std::vector<LabelId> top, std::vector<LabelId> bottom)
    : alphabet_(std::move(alphabet)), top_(std::move(top)), bottom_(std::move(bottom)) {
  if (top_.empty() || bottom_.empty()) throw EmptyRowError("exchange rows must be nonempty");
  const std::size_t n = alphabet_->size();
  std::vector<int> top_count(n, 0), bottom_count(n, 0);
  for (LabelId l : top_) {
    if (index(l) >= n) throw AlphabetMismatchError("label id outside the alphabet");
    ++top_count[index(l)];
  }
  for (LabelId l : bottom_) {
    if (index(l) >= n) throw AlphabetMismatchError("label id outside the alphabet");
    ++bottom_count[index(l)];
  }
  coefficients_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (top_count[i] + bottom_count[i] != 2) {
      throw LabelCountError("label '" + alphabet_->name(label_at(i)) + "' occurs " +
                            std::to_string(top_count[i] + bottom_count[i]) + " times, expected 2");
    }
    coefficients_[i] = top_count[i] - bottom_count[i];
    if (top_count[i] != 1) classical_ = false;
  }
}

std::string Exchange::to_string() const {
  std::string out = "top:";
  for (LabelId l : top_) out += " " + alphabet_->name(l);
  out += " | bottom:";
  for (LabelId l : bottom_) out += " " + alphabet_->name(l);
  return out;
}

bool operator==(const Exchange& a, const Exchange& b) {
  if (a.alphabet_ != b.alphabet_ && !(*a.alphabet_ == *b.alphabet_)) return false;
  return a.top_ == b.top_ && a.bottom_ == b.bottom_;
}

}  // namespace rauzy
