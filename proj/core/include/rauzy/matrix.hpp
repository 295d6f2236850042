#pragma once

#include "rauzy/numeric.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace rauzy {

// Exact determinant by fraction-free (Bareiss) elimination. `entries` is
// row-major n x n.
BigInt determinant(std::span<const BigInt> entries, std::size_t n);

// Square matrix of nonnegative arbitrary-precision integers with
// determinant exactly +1. Relates weights across a Rauzy sequence by
// w_old = Q * w_new. Immutable.
class TransitionMatrix {
 public:
  static TransitionMatrix identity(std::size_t n);
  // Identity plus a unit in (row, col), row != col.
  static TransitionMatrix elementary(std::size_t n, std::size_t row, std::size_t col);
  // Validates nonnegativity (DomainError) and det == 1 (UnimodularityError).
  static TransitionMatrix from_rows(const std::vector<std::vector<BigInt>>& rows);
  static TransitionMatrix from_entries(std::size_t n, std::vector<BigInt> entries);

  std::size_t size() const { return n_; }
  const BigInt& operator()(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }
  std::span<const BigInt> entries() const { return entries_; }

  std::vector<BigInt> column_sums() const;
  bool all_positive() const;
  bool is_identity() const;

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  TransitionMatrix(std::size_t n, std::vector<BigInt> entries) : n_(n), entries_(std::move(entries)) {}

  std::size_t n_ = 0;
  std::vector<BigInt> entries_;
};

// Exact product Q1 * Q2. Throws DimensionMismatchError, and
// UnimodularityError if the product's determinant is not 1.
TransitionMatrix compose(const TransitionMatrix& q1, const TransitionMatrix& q2);

// Q * v for exact or floating vectors.
std::vector<Rational> multiply(const TransitionMatrix& q, std::span<const Rational> v);
std::vector<BigInt> multiply(const TransitionMatrix& q, std::span<const BigInt> v);
std::vector<double> multiply(const TransitionMatrix& q, std::span<const double> v);

// Entries as doubles after dividing by 2^shift, shift chosen so the largest
// entry has magnitude below 2^64. Returns the shift used.
int scaled_entries(const TransitionMatrix& q, std::vector<double>& out);

// JSON array of arrays of decimal strings.
nlohmann::json to_json(const TransitionMatrix& q);
TransitionMatrix matrix_from_json(const nlohmann::json& j);
// Accepts the JSON form with or without quotes around entries,
// e.g. "[[2,1],[1,1]]".
TransitionMatrix parse_matrix(std::string_view text);

}  // namespace rauzy
