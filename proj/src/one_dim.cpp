#include "derw/one_dim.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace derw {

std::pair<double, double> one_dim_transition(const OneDimModel& m, long long x) {
  if (!(m.beta >= 0.0)) throw std::invalid_argument("one_dim: beta must be >= 0");
  if (x == 0) return {0.5, 0.5};
  double out = 1.0 / (1.0 + std::exp(-m.beta));
  double in = 1.0 - out;
  return x > 0 ? std::make_pair(out, in) : std::make_pair(in, out);
}

long long one_dim_walk(const OneDimModel& m, long steps, RngStream& rng) {
  if (steps < 0) throw std::invalid_argument("one_dim: negative step count");
  long long x = 0;
  for (long i = 0; i < steps; ++i) {
    auto [p_right, p_left] = one_dim_transition(m, x);
    (void)p_right;
    x += rng.next_double() < p_left ? -1 : 1;
  }
  return x;
}

double lln_limit(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("lln_limit: beta must be positive");
  double e = std::exp(-beta);
  return (1.0 - e) / (1.0 + e);
}

CrossingField one_dim_expected_field(const Graph& zpath,
                                     std::span<const Vertex> trajectory) {
  if (!zpath.has_coordinates() || zpath.max_degree() > 2)
    throw std::invalid_argument("one_dim: expected a z_path graph");
  if (trajectory.empty())
    throw std::invalid_argument("one_dim: empty trajectory");
  int half = zpath.radius();
  auto coord = [&](Vertex v) { return zpath.coordinate(v)[0]; };
  if (coord(trajectory.front()) != 0)
    throw std::invalid_argument("one_dim: trajectory must start at the origin");
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    int x = coord(trajectory[i]);
    if (std::abs(x) >= half)
      throw std::invalid_argument(
          "one_dim: trajectory leaves the interior at step " + std::to_string(i));
    if (i > 0 && std::abs(x - coord(trajectory[i - 1])) != 1)
      throw std::invalid_argument("one_dim: non-adjacent trajectory step");
  }
  int final_x = coord(trajectory.back());
  CrossingField field(zpath);
  Vertex origin = zpath.origin();
  if (final_x > 0) {
    for (int i = 0; i < final_x; ++i)
      field.set_crossing(origin + i, origin + i + 1, 1);
  } else if (final_x < 0) {
    for (int i = 0; i > final_x; --i)
      field.set_crossing(origin + i, origin + i - 1, 1);
  }
  return field;
}

}  // namespace derw
