#include "derw/coupling.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "derw/trapping.hpp"

namespace derw {

CouplingReport coupled_run(const Graph& ball, std::span<const int> radii,
                           double beta, RngStream rng, long max_steps,
                           double epsilon) {
  if (!ball.has_coordinates())
    throw std::invalid_argument("coupled_run: graph has no lattice coordinates");
  if (max_steps < 0)
    throw std::invalid_argument("coupled_run: negative step budget");
  int dim = static_cast<int>(ball.coordinate(0).size());
  for (int r : radii)
    if (r < 1 || r >= ball.radius())
      throw std::invalid_argument("coupled_run: radius " + std::to_string(r) +
                                  " not in 1.." +
                                  std::to_string(ball.radius() - 1));

  std::vector<Graph> balls;
  balls.reserve(radii.size());  // lanes keep pointers into this vector
  for (int r : radii) balls.push_back(Graph::zd_ball(dim, r));

  // The construction identifies each sub-ball vertex with the full-ball
  // vertex of the same id. Check the assumption instead of trusting it:
  // coordinates must agree everywhere, neighbor lists on the sub-ball's
  // strict interior.
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const Graph& sub = balls[i];
    if (sub.vertex_count() > ball.vertex_count() || sub.origin() != ball.origin())
      throw std::logic_error("coupled_run: sub-ball ids misaligned");
    for (Vertex v = 0; v < sub.vertex_count(); ++v) {
      auto pc = sub.coordinate(v);
      auto qc = ball.coordinate(v);
      if (!std::equal(pc.begin(), pc.end(), qc.begin(), qc.end()))
        throw std::logic_error("coupled_run: sub-ball ids misaligned");
      if (sub.l1_norm(v) >= radii[i]) continue;
      auto a = sub.neighbors(v);
      auto b = ball.neighbors(v);
      if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin()))
        throw std::logic_error("coupled_run: sub-ball ids misaligned");
    }
  }

  struct Lane {
    WalkerState state;
    TrapObserver observer;
    RngStream own;
    CoupledWalkerOutcome outcome;
    bool coupled = true;
    bool stopped = false;
  };
  std::vector<Lane> lanes;
  lanes.reserve(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) {
    lanes.push_back(Lane{WalkerState(balls[i], balls[i].origin(), beta),
                         TrapObserver(balls[i], beta, epsilon),
                         rng.substream(static_cast<std::uint64_t>(i)),
                         CoupledWalkerOutcome{}});
    lanes.back().outcome.radius = radii[i];
    lanes.back().observer.on_start(lanes.back().state);
  }

  WalkerState full(ball, ball.origin(), beta);
  TrapObserver full_obs(ball, beta, epsilon);
  full_obs.on_start(full);
  std::optional<StopReason> full_stop;

  for (long t = 1; t <= max_steps; ++t) {
    bool done = full_stop.has_value();
    for (const auto& lane : lanes) done = done && lane.stopped;
    if (done) break;

    // One quantile per global step, shared by the full walk and every lane
    // still coupled to it. While coupled, a lane's trajectory and field
    // match the full walk's exactly, so both sides see the same transition
    // distribution and the shared quantile moves them in lockstep.
    double shared = rng.next_double();
    bool full_moved = false;
    if (!full_stop) {
      apply_step(full, shared);
      full_moved = true;
      full_stop = full_obs.after_step(full);
    }
    for (auto& lane : lanes) {
      if (lane.stopped) continue;
      if (lane.coupled) {
        apply_step(lane.state, shared);
        if (full_moved)
          lane.outcome.prefix_ok =
              lane.outcome.prefix_ok && lane.state.position == full.position;
      } else {
        apply_step(lane.state, lane.own);
      }
      if (auto r = lane.observer.after_step(lane.state)) {
        lane.stopped = true;
        lane.outcome.stop = *r;
      }
    }
    // The step that carries the full walk onto norm radius is still shared
    // (it leaves a strictly interior vertex); afterwards the boundary breaks
    // the lockstep and the lane continues on its own substream.
    if (full_moved) {
      int norm = ball.l1_norm(full.position);
      for (auto& lane : lanes) {
        if (lane.coupled && norm == lane.outcome.radius) {
          lane.outcome.sigma = t;
          lane.coupled = false;
        }
      }
    }
  }

  CouplingReport report;
  report.full_walk.start = full.start;
  report.full_walk.final_position = full.position;
  report.full_walk.steps = full.step_count;
  report.full_walk.stop = full_stop.value_or(StopReason::budget);
  full_obs.finalize(report.full_walk);
  for (auto& lane : lanes) {
    lane.outcome.steps = lane.state.step_count;
    if (!lane.stopped) lane.outcome.stop = StopReason::budget;
    lane.outcome.certificate = lane.observer.certificate();
    report.walkers.push_back(std::move(lane.outcome));
  }
  return report;
}

}  // namespace derw
