#pragma once

#include "rauzy/errors.hpp"
#include "rauzy/exchange.hpp"
#include "rauzy/numeric.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace rauzy {

// Nonnegative branch weights indexed by the labels of an alphabet.
// Scalar is Rational (exact), BigInt (exact, projectively scaled to
// integers) or double (fast).
template <class Scalar>
class BasicWeights {
 public:
  using value_type = Scalar;

  BasicWeights(AlphabetPtr alphabet, std::vector<Scalar> values)
      : alphabet_(std::move(alphabet)), values_(std::move(values)) {
    if (values_.size() != alphabet_->size()) {
      throw AlphabetMismatchError("weight vector has " + std::to_string(values_.size()) +
                                  " entries for an alphabet of " + std::to_string(alphabet_->size()));
    }
    for (const auto& v : values_) {
      if (v < 0) throw DomainError("weights must be nonnegative");
    }
  }

  const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
  const Alphabet& alphabet() const { return *alphabet_; }
  std::size_t size() const { return values_.size(); }

  const Scalar& operator[](LabelId id) const { return values_[index(id)]; }
  const Scalar& at(std::string_view label) const { return values_[index(alphabet_->id(label))]; }
  std::span<const Scalar> values() const { return values_; }

  Scalar total() const {
    Scalar s = 0;
    for (const auto& v : values_) s += v;
    return s;
  }

  bool strictly_positive() const {
    for (const auto& v : values_) {
      if (!(v > 0)) return false;
    }
    return true;
  }

  friend bool operator==(const BasicWeights& a, const BasicWeights& b) {
    return a.alphabet_->names() == b.alphabet_->names() && a.values_ == b.values_;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Scalar> values_;
};

using WeightVector = BasicWeights<Rational>;
using ScaledWeights = BasicWeights<BigInt>;
using FastWeights = BasicWeights<double>;

// Rejects weights whose alphabet differs from the exchange's.
void require_same_alphabet(const Alphabet& expected, const Alphabet& actual);

// Top multiplicity-weighted sum minus bottom multiplicity-weighted sum.
template <class Scalar>
Scalar switch_defect(const Exchange& ex, const BasicWeights<Scalar>& w) {
  require_same_alphabet(ex.alphabet(), w.alphabet());
  Scalar d = 0;
  const auto& coef = ex.switch_coefficients();
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (coef[i] != 0) d += Scalar(coef[i]) * w.values()[i];
  }
  return d;
}

// Projective normalization to total weight 1.
WeightVector normalized(const WeightVector& w);
WeightVector normalized(const ScaledWeights& w);
FastWeights normalized(const FastWeights& w);

FastWeights to_fast(const WeightVector& w);
FastWeights to_fast(const ScaledWeights& w);
WeightVector to_exact(const FastWeights& w);
WeightVector to_exact(const ScaledWeights& w);
// Clears denominators; the result is a positive multiple of w.
ScaledWeights to_scaled(const WeightVector& w);

// "a=0.25,b=1/2" over the given alphabet; every label must appear once.
WeightVector parse_weights(const AlphabetPtr& alphabet, std::string_view text);

// JSON object keyed by label; values are "p/q" strings (exact) or
// 17-significant-digit decimal strings (fast).
nlohmann::json to_json(const WeightVector& w);
nlohmann::json to_json(const FastWeights& w);
WeightVector weights_from_json(const AlphabetPtr& alphabet, const nlohmann::json& j);
FastWeights fast_weights_from_json(const AlphabetPtr& alphabet, const nlohmann::json& j);

}  // namespace rauzy
