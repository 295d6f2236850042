#pragma once

#include "rauzy/exchange.hpp"
#include "rauzy/rng.hpp"
#include "rauzy/weights.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace rauzy {

// Vertices of { w >= 0, A w = 0, sum(w) = 1 } by exhaustive basic-solution
// enumeration over supports; exact. Rows of A may be zero. Throws
// EmptyPolytopeError when only w = 0 satisfies A w = 0, w >= 0.
std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<std::vector<Rational>>& constraints,
                                                      std::size_t n);

// Exact rank of a set of rational vectors.
std::size_t rank(std::vector<std::vector<Rational>> rows);

// Affine dimension of the hull of the given points.
std::size_t affine_dimension(const std::vector<std::vector<Rational>>& points);

// One simplex of a triangulation: indices into the vertex list plus its
// m-dimensional volume in the affine hull.
struct Simplex {
  std::vector<std::size_t> vertices;
  double volume = 0.0;
};

// Normalized carried weights of an exchange: the chart P for the measure
// (Lebesgue on this polytope). Immutable; the triangulation is built on first
// use and is safe to request from several threads.
class CarriedPolytope {
 public:
  const Exchange& exchange() const { return exchange_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<WeightVector>& vertices() const { return vertices_; }
  // True when the polytope is the whole standard simplex on the alphabet.
  bool is_full_simplex() const { return vertices_.size() == exchange_.size() && dimension_ + 1 == exchange_.size(); }

  // Pulling triangulation: simplices cover the polytope without overlap.
  const std::vector<Simplex>& triangulation() const;
  double volume() const;
  // Exact centroid computed from the triangulation.
  std::vector<double> centroid() const;

  friend CarriedPolytope carried_polytope(const Exchange& ex);

 private:
  struct Lazy {
    std::once_flag once;
    std::vector<Simplex> simplices;
    std::vector<double> cdf;
    double volume = 0.0;
  };

  CarriedPolytope(Exchange ex, std::vector<WeightVector> vertices, std::size_t dimension);
  void build() const;

  friend class PolytopeSampler;

  Exchange exchange_;
  std::vector<WeightVector> vertices_;
  std::size_t dimension_;
  std::shared_ptr<Lazy> lazy_;
};

CarriedPolytope carried_polytope(const Exchange& ex);

// Uniform (Lebesgue) sampling of carried polytopes: pick a simplex with
// probability proportional to volume, then a uniform point in it.
class PolytopeSampler {
 public:
  explicit PolytopeSampler(const CarriedPolytope& poly);

  // Exact point whose barycentric coordinates are spacings of sorted
  // `bits`-bit uniform integers; uniform on a lattice of mesh 2^-bits.
  WeightVector sample_exact(RandomStream& rng, unsigned bits = 256) const;
  // Same distribution, returned with denominators cleared.
  ScaledWeights sample_scaled(RandomStream& rng, unsigned bits = 256) const;
  FastWeights sample_fast(RandomStream& rng) const;
  // Deterministic map from the unit cube [0,1)^dim to the polytope that
  // pushes Lebesgue measure forward to the uniform distribution and is
  // monotone in u[0]; used for stratified estimates.
  FastWeights from_unit_cube(std::span<const double> u) const;
  // n points with the first cube coordinate stratified into n equal cells.
  std::vector<FastWeights> stratified(std::size_t n, RandomStream& rng) const;

  const CarriedPolytope& polytope() const { return poly_; }

 private:
  std::size_t pick_simplex(double u, double& remainder) const;
  std::vector<BigInt> scaled_point(RandomStream& rng, unsigned bits) const;

  CarriedPolytope poly_;
  std::vector<std::vector<double>> fast_vertices_;
  BigInt vertex_denominator_;
  std::vector<std::vector<BigInt>> scaled_vertices_;
};

// Deterministic given the seed.
WeightVector sample_carried(const CarriedPolytope& poly, std::uint64_t seed);

}  // namespace rauzy
