#include "rauzy/matrix.hpp"

#include "rauzy/errors.hpp"

#include <cmath>
#include <string>

namespace rauzy {

BigInt determinant(std::span<const BigInt> entries, std::size_t n) {
  if (entries.size() != n * n) throw DimensionMismatchError("determinant: entry count is not n*n");
  if (n == 0) return 1;
  std::vector<BigInt> a(entries.begin(), entries.end());
  auto at = [&](std::size_t r, std::size_t c) -> BigInt& { return a[r * n + c]; };
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(p, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // Exact division: Bareiss' identity guarantees divisibility.
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

TransitionMatrix TransitionMatrix::identity(std::size_t n) {
  std::vector<BigInt> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1;
  return TransitionMatrix(n, std::move(e));
}

TransitionMatrix TransitionMatrix::elementary(std::size_t n, std::size_t row, std::size_t col) {
  if (row >= n || col >= n || row == col) throw RangeError("elementary matrix needs distinct in-range indices");
  auto q = identity(n);
  q.entries_[row * n + col] = 1;
  return q;
}

TransitionMatrix TransitionMatrix::from_entries(std::size_t n, std::vector<BigInt> entries) {
  if (entries.size() != n * n) throw DimensionMismatchError("matrix entry count is not n*n");
  for (const auto& e : entries) {
    if (e < 0) throw DomainError("transition matrices have nonnegative entries");
  }
  BigInt det = determinant(entries, n);
  if (det != 1) throw UnimodularityError("transition matrix determinant is " + det.str() + ", expected 1");
  return TransitionMatrix(n, std::move(entries));
}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows) {
  const std::size_t n = rows.size();
  std::vector<BigInt> e;
  e.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionMismatchError("transition matrix must be square");
    e.insert(e.end(), r.begin(), r.end());
  }
  return from_entries(n, std::move(e));
}

std::vector<BigInt> TransitionMatrix::column_sums() const {
  std::vector<BigInt> s(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) s[c] += entries_[r * n_ + c];
  }
  return s;
}

bool TransitionMatrix::all_positive() const {
  for (const auto& e : entries_) {
    if (e == 0) return false;
  }
  return true;
}

bool TransitionMatrix::is_identity() const { return *this == identity(n_); }

TransitionMatrix compose(const TransitionMatrix& q1, const TransitionMatrix& q2) {
  if (q1.size() != q2.size()) {
    throw DimensionMismatchError("cannot compose " + std::to_string(q1.size()) + "x" + std::to_string(q1.size()) +
                                 " with " + std::to_string(q2.size()) + "x" + std::to_string(q2.size()));
  }
  const std::size_t n = q1.size();
  std::vector<BigInt> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const BigInt& a = q1(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] += a * q2(k, j);
    }
  }
  return TransitionMatrix::from_entries(n, std::move(e));
}

namespace {

template <class T>
std::vector<T> multiply_impl(const TransitionMatrix& q, std::span<const T> v) {
  const std::size_t n = q.size();
  if (v.size() != n) throw DimensionMismatchError("vector length does not match matrix size");
  std::vector<T> out(n, T(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (q(i, j) != 0) out[i] += T(q(i, j)) * v[j];
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> multiply(const TransitionMatrix& q, std::span<const Rational> v) { return multiply_impl(q, v); }
std::vector<BigInt> multiply(const TransitionMatrix& q, std::span<const BigInt> v) { return multiply_impl(q, v); }

std::vector<double> multiply(const TransitionMatrix& q, std::span<const double> v) {
  std::vector<double> scaled;
  const int shift = scaled_entries(q, scaled);
  const std::size_t n = q.size();
  if (v.size() != n) throw DimensionMismatchError("vector length does not match matrix size");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i] += scaled[i * n + j] * v[j];
    out[i] = std::ldexp(out[i], shift);
  }
  return out;
}

int scaled_entries(const TransitionMatrix& q, std::vector<double>& out) {
  std::size_t bits = 0;
  for (const auto& e : q.entries()) {
    if (e != 0) bits = std::max<std::size_t>(bits, msb(e) + 1);
  }
  const int shift = bits > 64 ? static_cast<int>(bits - 64) : 0;
  out.clear();
  out.reserve(q.entries().size());
  for (const auto& e : q.entries()) out.push_back(to_double(shift > 0 ? BigInt(e >> shift) : e));
  return shift;
}

nlohmann::json to_json(const TransitionMatrix& q) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < q.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < q.size(); ++j) row.push_back(q(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

TransitionMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  std::vector<std::vector<BigInt>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ParseError("matrix rows must be arrays");
    std::vector<BigInt> row;
    for (const auto& e : r) {
      if (e.is_string()) {
        Rational v = parse_rational(e.get<std::string>());
        if (denominator(v) != 1) throw ParseError("matrix entries must be integers");
        row.push_back(numerator(v));
      } else if (e.is_number_integer()) {
        row.emplace_back(e.get<long long>());
      } else {
        throw ParseError("matrix entries must be integers");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix must be nonempty");
  return TransitionMatrix::from_rows(rows);
}

TransitionMatrix parse_matrix(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed matrix: ") + e.what());
  }
  return matrix_from_json(j);
}

}  // namespace rauzy
