#pragma once

#include "rauzy/matrix.hpp"
#include "rauzy/polytope.hpp"
#include "rauzy/weights.hpp"

#include <nlohmann/json.hpp>

#include <optional>

namespace rauzy {

// x -> Qx / |Qx|_1, mapping the new chart into the old one. `x` must be
// normalized. Throws ZeroImageError if Qx vanishes.
WeightVector apply_projective(const TransitionMatrix& q, const WeightVector& x);
FastWeights apply_projective(const TransitionMatrix& q, const FastWeights& x);

// 1 / |Qx|_1^exponent, with exponent = (polytope dimension) + 1.
double jacobian(const TransitionMatrix& q, const WeightVector& x, int exponent);
double jacobian(const TransitionMatrix& q, const FastWeights& x, int exponent);

// Constant factor between `jacobian` and the Jacobian determinant of the
// projective map computed against m-dimensional Lebesgue measure on the two
// charts: det(Q restricted to the source span) * h_source / h_target, where
// h is the distance from the origin to the normalized slice of each span.
// Equals 1 when both charts are full simplices.
double measure_scale(const TransitionMatrix& q, const CarriedPolytope& source, const CarriedPolytope& target);

enum class DistortionMode : std::uint8_t { colsum_bound, exact };

struct DistortionReport {
  // (max column sum / min column sum)^exponent; an upper bound for the true
  // sup/inf Jacobian ratio.
  double colsum_bound = 1.0;
  // max/min of |Qv|_1 over the polytope's vertices, to the exponent; the
  // true ratio since |Qx|_1 is linear on the polytope.
  std::optional<double> exact_value;
  int exponent = 1;
  // Points where the Jacobian is largest and smallest.
  WeightVector witness_max;
  WeightVector witness_min;
};

DistortionReport distortion(const TransitionMatrix& q, const CarriedPolytope& poly, DistortionMode mode);
// Colsum bound alone, with unit-vector witnesses; needs no polytope.
DistortionReport colsum_report(const TransitionMatrix& q, int exponent, const AlphabetPtr& alphabet);

// Exact test: (max colsum / min colsum)^exponent <= bound.
bool colsum_within(std::span<const BigInt> column_sums, int exponent, const Rational& bound);

// c = 1/C: measure ratios survive a C-distorted stage up to the factor c.
// Throws DomainError if C <= 1.
double transport_constant(double C);

nlohmann::json to_json(const DistortionReport& r);

}  // namespace rauzy
