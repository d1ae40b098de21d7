#pragma once

#include "edgeworth/convex_set.hpp"
#include "edgeworth/expansion.hpp"

#include <cstdint>

namespace edgeworth {

// Exact signed measure of a box: each term c_nu He_nu phi factorizes into
// one-dimensional partial integrals of Gaussian derivatives.
double expansion_measure_box(const EdgeworthExpansion& e, const Box& box);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

inline constexpr std::size_t kMcBlock = 8192;

// Importance sampling from N(0, I): mean of 1_B(Z) * density(Z)/phi(Z).
// Requires N >= 1000. Blocks of kMcBlock draws use independent substreams,
// so the result is independent of the thread count.
McEstimate expansion_measure_mc(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t samples,
                                std::uint64_t seed);
McEstimate expansion_measure_mc_serial(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t samples,
                                       std::uint64_t seed);

// Standard Gaussian measure of the set: product of Phi differences (box),
// Phi(offset) (half-space), or a radial quadrature (ball).
double gaussian_measure(const ConvexSet& set);

// Measure of the set under the expansion: exact for boxes, the Gaussian
// closed forms when there are no correction terms, otherwise Monte Carlo.
double expansion_measure(const EdgeworthExpansion& e, const ConvexSet& set, std::size_t mc_samples,
                         std::uint64_t seed);

}  // namespace edgeworth
