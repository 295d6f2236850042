#include "rauzy/projective.hpp"

#include "rauzy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rauzy {

namespace {

void require_size(const TransitionMatrix& q, std::size_t n) {
  if (q.size() != n) {
    throw DimensionMismatchError("matrix is " + std::to_string(q.size()) + "x" + std::to_string(q.size()) +
                                 " but the weights have " + std::to_string(n) + " entries");
  }
}

[[noreturn]] void zero_image(const std::vector<bool>& support) {
  std::string cols;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (support[j]) cols += (cols.empty() ? "" : ",") + std::to_string(j);
  }
  throw ZeroImageError("Qx = 0: every column in the support {" + cols + "} of x is zero");
}

double pow_ratio(const Rational& ratio, int exponent) {
  // Ratios beyond double range saturate to infinity.
  const double r = to_double(ratio);
  if (std::isfinite(r)) return std::pow(r, exponent);
  return std::numeric_limits<double>::infinity();
}

// Orthonormal basis (rows) of the span of the given vectors.
std::vector<std::vector<long double>> orthonormal_basis(const std::vector<std::vector<double>>& vectors) {
  std::vector<std::vector<long double>> basis;
  for (const auto& v : vectors) {
    std::vector<long double> u(v.begin(), v.end());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        long double dot = 0;
        for (std::size_t k = 0; k < u.size(); ++k) dot += u[k] * b[k];
        for (std::size_t k = 0; k < u.size(); ++k) u[k] -= dot * b[k];
      }
    }
    long double norm = 0;
    for (auto x : u) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-12L) continue;
    for (auto& x : u) x /= norm;
    basis.push_back(std::move(u));
  }
  return basis;
}

long double determinant_ld(std::vector<std::vector<long double>> a) {
  const std::size_t n = a.size();
  long double det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    }
    if (a[p][c] == 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

std::vector<std::vector<double>> vertex_vectors(const CarriedPolytope& poly) {
  std::vector<std::vector<double>> out;
  for (const auto& v : poly.vertices()) {
    std::vector<double> x;
    for (const auto& e : v.values()) x.push_back(to_double(e));
    out.push_back(std::move(x));
  }
  return out;
}

long double slice_distance(const std::vector<std::vector<long double>>& basis) {
  long double norm2 = 0;
  for (const auto& b : basis) {
    long double dot = 0;
    for (auto x : b) dot += x;
    norm2 += dot * dot;
  }
  return 1.0L / std::sqrt(norm2);
}

}  // namespace

WeightVector apply_projective(const TransitionMatrix& q, const WeightVector& x) {
  require_size(q, x.size());
  if (x.total() != 1) throw DomainError("apply_projective expects a normalized weight vector");
  auto y = multiply(q, x.values());
  Rational s = 0;
  for (const auto& v : y) s += v;
  if (s == 0) {
    std::vector<bool> support;
    for (const auto& v : x.values()) support.push_back(v != 0);
    zero_image(support);
  }
  for (auto& v : y) v /= s;
  return {x.alphabet_ptr(), std::move(y)};
}

FastWeights apply_projective(const TransitionMatrix& q, const FastWeights& x) {
  require_size(q, x.size());
  if (std::fabs(x.total() - 1.0) > 1e-9) throw DomainError("apply_projective expects a normalized weight vector");
  auto y = multiply(q, x.values());
  double s = 0;
  for (double v : y) s += v;
  if (!(s > 0)) {
    std::vector<bool> support;
    for (double v : x.values()) support.push_back(v != 0);
    zero_image(support);
  }
  for (auto& v : y) v /= s;
  return {x.alphabet_ptr(), std::move(y)};
}

double jacobian(const TransitionMatrix& q, const WeightVector& x, int exponent) {
  require_size(q, x.size());
  if (x.total() != 1) throw DomainError("jacobian expects a normalized weight vector");
  const auto sums = q.column_sums();
  Rational s = 0;
  for (std::size_t j = 0; j < sums.size(); ++j) s += sums[j] * x.values()[j];
  if (s == 0) throw ZeroImageError("Qx = 0");
  return std::exp(-exponent * std::log(to_double(s)));
}

double jacobian(const TransitionMatrix& q, const FastWeights& x, int exponent) {
  require_size(q, x.size());
  if (std::fabs(x.total() - 1.0) > 1e-9) throw DomainError("jacobian expects a normalized weight vector");
  double s = 0;
  for (double v : multiply(q, x.values())) s += v;
  if (!(s > 0)) throw ZeroImageError("Qx = 0");
  return std::exp(-exponent * std::log(s));
}

double measure_scale(const TransitionMatrix& q, const CarriedPolytope& source, const CarriedPolytope& target) {
  require_size(q, source.exchange().size());
  require_size(q, target.exchange().size());
  const auto src = orthonormal_basis(vertex_vectors(source));
  const auto dst = orthonormal_basis(vertex_vectors(target));
  if (src.size() != dst.size()) throw DimensionMismatchError("source and target charts differ in dimension");
  std::vector<double> scaled;
  const int shift = scaled_entries(q, scaled);
  const std::size_t n = q.size();
  const std::size_t k = src.size();
  // Coordinates of Q b_j in the target basis.
  std::vector<std::vector<long double>> m(k, std::vector<long double>(k));
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<long double> qb(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) qb[r] += scaled[r * n + c] * src[j][c];
    }
    for (std::size_t i = 0; i < k; ++i) {
      long double dot = 0;
      for (std::size_t r = 0; r < n; ++r) dot += dst[i][r] * qb[r];
      m[i][j] = dot;
    }
  }
  const long double det = std::fabs(determinant_ld(std::move(m)));
  const long double ratio = slice_distance(src) / slice_distance(dst);
  return static_cast<double>(std::ldexp(det * ratio, shift * static_cast<int>(k)));
}

bool colsum_within(std::span<const BigInt> column_sums, int exponent, const Rational& bound) {
  if (column_sums.empty()) return true;
  const auto [lo, hi] = std::minmax_element(column_sums.begin(), column_sums.end());
  if (*lo <= 0) return false;
  BigInt lhs = pow(*hi, static_cast<unsigned>(exponent));
  BigInt rhs = pow(*lo, static_cast<unsigned>(exponent));
  // hi^e <= bound * lo^e  <=>  hi^e * den <= num * lo^e
  return lhs * denominator(bound) <= numerator(bound) * rhs;
}

DistortionReport colsum_report(const TransitionMatrix& q, int exponent, const AlphabetPtr& alphabet) {
  const std::size_t n = q.size();
  require_size(q, alphabet->size());
  const auto sums = q.column_sums();
  const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
  const auto unit = [&](std::size_t j) {
    std::vector<Rational> e(n, Rational(0));
    e[j] = 1;
    return WeightVector(alphabet, std::move(e));
  };
  return DistortionReport{
      .colsum_bound = pow_ratio(Rational(*hi, *lo), exponent),
      .exact_value = std::nullopt,
      .exponent = exponent,
      .witness_max = unit(static_cast<std::size_t>(lo - sums.begin())),
      .witness_min = unit(static_cast<std::size_t>(hi - sums.begin())),
  };
}

DistortionReport distortion(const TransitionMatrix& q, const CarriedPolytope& poly, DistortionMode mode) {
  const std::size_t n = poly.exchange().size();
  require_size(q, n);
  if (poly.vertices().empty()) throw EmptyPolytopeError("distortion of an empty polytope");
  const int exponent = static_cast<int>(poly.dimension()) + 1;
  auto report = colsum_report(q, exponent, poly.exchange().alphabet_ptr());
  if (mode == DistortionMode::exact) {
    std::size_t arg_lo = 0, arg_hi = 0;
    std::vector<Rational> norms;
    const auto sums = q.column_sums();
    for (const auto& v : poly.vertices()) {
      Rational s = 0;
      for (std::size_t j = 0; j < n; ++j) s += sums[j] * v.values()[j];
      norms.push_back(s);
    }
    for (std::size_t i = 1; i < norms.size(); ++i) {
      if (norms[i] < norms[arg_lo]) arg_lo = i;
      if (norms[i] > norms[arg_hi]) arg_hi = i;
    }
    report.exact_value = pow_ratio(norms[arg_hi] / norms[arg_lo], exponent);
    report.witness_max = poly.vertices()[arg_lo];
    report.witness_min = poly.vertices()[arg_hi];
  }
  return report;
}

double transport_constant(double C) {
  if (!(C > 1.0)) throw DomainError("transport constant needs C > 1");
  return 1.0 / C;
}

nlohmann::json to_json(const DistortionReport& r) {
  nlohmann::json j;
  j["colsum_bound"] = r.colsum_bound;
  j["exact_value"] = r.exact_value ? nlohmann::json(*r.exact_value) : nlohmann::json(nullptr);
  j["exponent"] = r.exponent;
  j["witness_max"] = to_json(r.witness_max);
  j["witness_min"] = to_json(r.witness_min);
  return j;
}

}  // namespace rauzy
