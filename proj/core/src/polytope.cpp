#include "rauzy/polytope.hpp"

#include "rauzy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <set>

namespace rauzy {

namespace {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Row-reduces in place, returns the pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = 0; j < m[i].size(); ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Unique solution of M_S y = rhs restricted to the columns in `support`, or
// nothing when the columns are dependent or the system is inconsistent.
std::optional<std::vector<Rational>> solve_on_support(const RationalMatrix& system, const std::vector<Rational>& rhs,
                                                      const std::vector<std::size_t>& support) {
  RationalMatrix aug(system.size(), std::vector<Rational>(support.size() + 1));
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (std::size_t j = 0; j < support.size(); ++j) aug[i][j] = system[i][support[j]];
    aug[i][support.size()] = rhs[i];
  }
  auto pivots = row_reduce(aug, support.size() + 1);
  if (!pivots.empty() && pivots.back() == support.size()) return std::nullopt;  // inconsistent
  if (pivots.size() != support.size()) return std::nullopt;                     // not unique
  std::vector<Rational> y(support.size());
  for (std::size_t k = 0; k < pivots.size(); ++k) y[pivots[k]] = aug[k][support.size()];
  return y;
}

void for_each_combination(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double simplex_volume(const std::vector<std::vector<Rational>>& pts, const std::vector<std::size_t>& simplex) {
  const std::size_t m = simplex.size() - 1;
  if (m == 0) return 1.0;
  const std::size_t n = pts[simplex[0]].size();
  std::vector<std::vector<Rational>> edges(m, std::vector<Rational>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) edges[i][j] = pts[simplex[i + 1]][j] - pts[simplex[0]][j];
  }
  RationalMatrix gram(m, std::vector<Rational>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < n; ++k) s += edges[i][k] * edges[j][k];
      gram[i][j] = s;
    }
  }
  // Determinant by elimination; Gram matrices of independent edges are SPD.
  Rational det = 1;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    while (p < m && gram[p][c] == 0) ++p;
    if (p == m) return 0.0;
    if (p != c) {
      std::swap(gram[p], gram[c]);
      det = -det;
    }
    det *= gram[c][c];
    for (std::size_t i = c + 1; i < m; ++i) {
      const Rational f = gram[i][c] / gram[c][c];
      for (std::size_t j = c; j < m; ++j) gram[i][j] -= f * gram[c][j];
    }
  }
  double factorial = 1.0;
  for (std::size_t k = 2; k <= m; ++k) factorial *= static_cast<double>(k);
  return std::sqrt(to_double(det)) / factorial;
}

std::vector<std::vector<std::size_t>> pulling_triangulation(const std::vector<std::vector<Rational>>& pts,
                                                            const std::vector<std::size_t>& face, std::size_t dim) {
  if (dim == 0) return {{face.front()}};
  const std::size_t apex = face.front();
  const std::size_t n = pts[apex].size();
  std::set<std::vector<std::size_t>> facets;
  for (std::size_t l = 0; l < n; ++l) {
    if (pts[apex][l] == 0) continue;  // facet would contain the apex
    std::vector<std::size_t> g;
    for (std::size_t v : face) {
      if (pts[v][l] == 0) g.push_back(v);
    }
    if (g.empty()) continue;
    std::vector<std::vector<Rational>> gp;
    for (std::size_t v : g) gp.push_back(pts[v]);
    if (affine_dimension(gp) + 1 == dim) facets.insert(std::move(g));
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& f : facets) {
    for (auto s : pulling_triangulation(pts, f, dim - 1)) {
      s.insert(s.begin(), apex);
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

std::size_t rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  return row_reduce(rows, cols).size();
}

std::size_t affine_dimension(const std::vector<std::vector<Rational>>& points) {
  if (points.size() <= 1) return 0;
  std::vector<std::vector<Rational>> diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    std::vector<Rational> d(points[i].size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = points[i][j] - points[0][j];
    diffs.push_back(std::move(d));
  }
  return rank(std::move(diffs));
}

std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<std::vector<Rational>>& constraints,
                                                      std::size_t n) {
  RationalMatrix system;
  for (const auto& row : constraints) {
    if (row.size() != n) throw DimensionMismatchError("constraint row length differs from the alphabet size");
    if (std::any_of(row.begin(), row.end(), [](const Rational& x) { return x != 0; })) system.push_back(row);
  }
  system.emplace_back(n, Rational(1));
  std::vector<Rational> rhs(system.size(), Rational(0));
  rhs.back() = 1;

  const std::size_t max_support = std::min(n, rank(system));
  std::vector<std::vector<Rational>> vertices;
  for (std::size_t k = 1; k <= max_support; ++k) {
    for_each_combination(n, k, [&](const std::vector<std::size_t>& support) {
      auto y = solve_on_support(system, rhs, support);
      if (!y) return;
      if (std::any_of(y->begin(), y->end(), [](const Rational& x) { return x <= 0; })) return;
      std::vector<Rational> v(n, Rational(0));
      for (std::size_t j = 0; j < support.size(); ++j) v[support[j]] = (*y)[j];
      vertices.push_back(std::move(v));
    });
  }
  if (vertices.empty()) throw EmptyPolytopeError("no nonzero nonnegative weights satisfy the constraints");
  return vertices;
}

CarriedPolytope::CarriedPolytope(Exchange ex, std::vector<WeightVector> vertices, std::size_t dimension)
    : exchange_(std::move(ex)), vertices_(std::move(vertices)), dimension_(dimension), lazy_(std::make_shared<Lazy>()) {}

CarriedPolytope carried_polytope(const Exchange& ex) {
  const std::size_t n = ex.size();
  std::vector<Rational> row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = ex.switch_coefficients()[i];
  auto raw = enumerate_vertices({row}, n);
  const std::size_t dim = affine_dimension(raw);
  std::vector<WeightVector> vertices;
  vertices.reserve(raw.size());
  for (auto& v : raw) vertices.emplace_back(ex.alphabet_ptr(), std::move(v));
  return CarriedPolytope(ex, std::move(vertices), dim);
}

void CarriedPolytope::build() const {
  std::call_once(lazy_->once, [this] {
    std::vector<std::vector<Rational>> pts;
    for (const auto& v : vertices_) pts.emplace_back(v.values().begin(), v.values().end());
    std::vector<std::size_t> all(pts.size());
    std::iota(all.begin(), all.end(), 0);
    for (auto& s : pulling_triangulation(pts, all, dimension_)) {
      double vol = simplex_volume(pts, s);
      lazy_->simplices.push_back({std::move(s), vol});
    }
    double total = 0.0;
    for (const auto& s : lazy_->simplices) {
      total += s.volume;
      lazy_->cdf.push_back(total);
    }
    for (auto& c : lazy_->cdf) c /= total;
    lazy_->volume = total;
  });
}

const std::vector<Simplex>& CarriedPolytope::triangulation() const {
  build();
  return lazy_->simplices;
}

double CarriedPolytope::volume() const {
  build();
  return lazy_->volume;
}

std::vector<double> CarriedPolytope::centroid() const {
  const auto& simplices = triangulation();
  std::vector<double> c(exchange_.size(), 0.0);
  for (const auto& s : simplices) {
    for (std::size_t v : s.vertices) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] += s.volume * to_double(vertices_[v].values()[j]) / static_cast<double>(s.vertices.size());
      }
    }
  }
  for (auto& x : c) x /= volume();
  return c;
}

PolytopeSampler::PolytopeSampler(const CarriedPolytope& poly) : poly_(poly) {
  poly.build();
  vertex_denominator_ = 1;
  for (const auto& v : poly.vertices()) {
    std::vector<double> f;
    for (const auto& x : v.values()) {
      f.push_back(to_double(x));
      vertex_denominator_ = lcm(vertex_denominator_, BigInt(denominator(x)));
    }
    fast_vertices_.push_back(std::move(f));
  }
  for (const auto& v : poly.vertices()) {
    std::vector<BigInt> s;
    for (const auto& x : v.values()) s.push_back(BigInt(numerator(x)) * (vertex_denominator_ / denominator(x)));
    scaled_vertices_.push_back(std::move(s));
  }
}

std::size_t PolytopeSampler::pick_simplex(double u, double& remainder) const {
  const auto& cdf = poly_.lazy_->cdf;
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t k = it == cdf.end() ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
  const double lo = k == 0 ? 0.0 : cdf[k - 1];
  const double width = cdf[k] - lo;
  remainder = width > 0 ? std::clamp((u - lo) / width, 0.0, std::nextafter(1.0, 0.0)) : 0.5;
  return k;
}

std::vector<BigInt> PolytopeSampler::scaled_point(RandomStream& rng, unsigned bits) const {
  if (bits == 0) throw DomainError("sampling precision must be positive");
  double unused = 0.0;
  const auto& simplex = poly_.lazy_->simplices[pick_simplex(rng.uniform(), unused)].vertices;
  const std::size_t d = simplex.size() - 1;
  const unsigned words = (bits + 63) / 64;
  BigInt modulus = 1;
  modulus <<= bits;
  std::vector<BigInt> cuts;
  cuts.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    BigInt u = 0;
    for (unsigned w = 0; w < words; ++w) {
      u <<= 64;
      u += rng();
    }
    cuts.push_back(u % modulus);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<BigInt> point(poly_.exchange().size());
  BigInt prev = 0;
  for (std::size_t i = 0; i <= d; ++i) {
    const BigInt next = i < d ? cuts[i] : modulus;
    const BigInt lambda = next - prev;
    prev = next;
    if (lambda == 0) continue;
    for (std::size_t j = 0; j < point.size(); ++j) point[j] += lambda * scaled_vertices_[simplex[i]][j];
  }
  return point;
}

ScaledWeights PolytopeSampler::sample_scaled(RandomStream& rng, unsigned bits) const {
  return {poly_.exchange().alphabet_ptr(), scaled_point(rng, bits)};
}

WeightVector PolytopeSampler::sample_exact(RandomStream& rng, unsigned bits) const {
  return normalized(sample_scaled(rng, bits));
}

FastWeights PolytopeSampler::from_unit_cube(std::span<const double> u) const {
  const std::size_t dim = poly_.dimension();
  if (u.size() < std::max<std::size_t>(dim, 1)) throw DimensionMismatchError("unit-cube point has too few coordinates");
  double remainder = 0.0;
  const auto& simplex = poly_.lazy_->simplices[pick_simplex(u[0], remainder)].vertices;
  const std::size_t n = poly_.exchange().size();
  std::vector<double> x = fast_vertices_[simplex[0]];
  for (std::size_t k = 1; k <= dim; ++k) {
    const double r = k == dim ? remainder : u[dim - k];
    const double s = std::pow(r, 1.0 / static_cast<double>(k));
    const auto& p = fast_vertices_[simplex[k]];
    for (std::size_t j = 0; j < n; ++j) x[j] = p[j] + s * (x[j] - p[j]);
  }
  for (auto& v : x) v = std::max(v, 0.0);
  return {poly_.exchange().alphabet_ptr(), std::move(x)};
}

FastWeights PolytopeSampler::sample_fast(RandomStream& rng) const {
  std::vector<double> u(std::max<std::size_t>(poly_.dimension(), 1));
  for (auto& v : u) v = rng.uniform();
  return from_unit_cube(u);
}

std::vector<FastWeights> PolytopeSampler::stratified(std::size_t n, RandomStream& rng) const {
  std::vector<FastWeights> out;
  out.reserve(n);
  std::vector<double> u(std::max<std::size_t>(poly_.dimension(), 1));
  for (std::size_t i = 0; i < n; ++i) {
    u[0] = (static_cast<double>(i) + rng.uniform()) / static_cast<double>(n);
    for (std::size_t k = 1; k < u.size(); ++k) u[k] = rng.uniform();
    out.push_back(from_unit_cube(u));
  }
  return out;
}

WeightVector sample_carried(const CarriedPolytope& poly, std::uint64_t seed) {
  RandomStream rng(seed);
  return PolytopeSampler(poly).sample_exact(rng);
}

}  // namespace rauzy
