#pragma once

#include <span>
#include <utility>

#include "derw/crossing_field.hpp"
#include "derw/rng.hpp"

namespace derw {

// Closed-form transition law of the walk on the integer line: the position
// alone determines the environment, so at the origin both directions have
// probability 1/2 and away from it the outward direction has probability
// 1 / (1 + e^{-beta}).
struct OneDimModel {
  double beta = 1.0;
};

// (p_right, p_left) at position x.
std::pair<double, double> one_dim_transition(const OneDimModel& m, long long x);

// Final position after n steps from 0, consuming one quantile per step with
// the same inverse-CDF convention as the graph engine (left neighbor first),
// so identical streams give identical paths while the engine stays interior.
long long one_dim_walk(const OneDimModel& m, long steps, RngStream& rng);

// Almost-sure speed limit |X_n| / n -> (1 - e^{-beta}) / (1 + e^{-beta}).
double lln_limit(double beta);

// Predicted crossing field on a z_path graph for a walk from the origin with
// the given trajectory (vertex ids): rightward edges between 0 and the final
// position carry crossing +1 when it is positive, mirrored when negative,
// everything else 0. The trajectory must start at the origin and stay
// strictly inside the truncation.
CrossingField one_dim_expected_field(const Graph& zpath,
                                     std::span<const Vertex> trajectory);

}  // namespace derw
