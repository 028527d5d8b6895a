#include "derw/walker.hpp"

#include <cmath>
#include <stdexcept>

namespace derw {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::budget: return "budget";
    case StopReason::trapped: return "trapped";
    case StopReason::boundary: return "boundary";
    case StopReason::custom: return "custom";
  }
  return "unknown";
}

WalkerState::WalkerState(const Graph& g, Vertex start_vertex, double beta_value)
    : graph(&g), beta(beta_value), start(start_vertex), position(start_vertex),
      field(g) {
  g.check_vertex(start_vertex);
  if (!(beta >= 0.0)) throw std::invalid_argument("walker: beta must be >= 0");
}

namespace {

// Weights exp(beta * (c - c_max)) for the neighbors of s.position, written
// into `weights`; returns their sum (always >= 1, the maximum contributes 1).
double neighbor_weights(const WalkerState& s, std::vector<double>& weights) {
  auto nb = s.graph->neighbors(s.position);
  if (nb.empty())
    throw std::runtime_error("walker: vertex " + std::to_string(s.position) +
                             " has no neighbors");
  int cmax = s.field.crossing(s.position, nb[0]);
  for (std::size_t i = 1; i < nb.size(); ++i)
    cmax = std::max(cmax, s.field.crossing(s.position, nb[i]));
  weights.resize(nb.size());
  double total = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    double w = std::exp(s.beta * (s.field.crossing(s.position, nb[i]) - cmax));
    weights[i] = w;
    total += w;
  }
  return total;
}

}  // namespace

TransitionDistribution transition_distribution(const WalkerState& s) {
  std::vector<double> weights;
  double total = neighbor_weights(s, weights);
  auto nb = s.graph->neighbors(s.position);
  TransitionDistribution dist;
  dist.reserve(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i)
    dist.emplace_back(nb[i], weights[i] / total);
  return dist;
}

Vertex apply_step(WalkerState& s, double quantile) {
  if (!(quantile >= 0.0 && quantile < 1.0))
    throw std::invalid_argument("walker: quantile must lie in [0, 1)");
  thread_local std::vector<double> weights;
  double total = neighbor_weights(s, weights);
  auto nb = s.graph->neighbors(s.position);
  double target = quantile * total;
  double cum = 0.0;
  std::size_t pick = nb.size() - 1;  // rounding guard: fall into the last slot
  for (std::size_t i = 0; i < nb.size(); ++i) {
    cum += weights[i];
    if (target < cum) {
      pick = i;
      break;
    }
  }
  Vertex next = nb[pick];
  s.field.record_step(s.position, next);
  s.position = next;
  ++s.step_count;
  return next;
}

Vertex apply_step(WalkerState& s, RngStream& rng) {
  return apply_step(s, rng.next_double());
}

TrialRecord run_walk(WalkerState& s, RngStream& rng, long max_steps,
                     std::span<Observer* const> observers) {
  if (max_steps < 0) throw std::invalid_argument("walker: negative step budget");
  TrialRecord rec;
  rec.start = s.start;
  for (Observer* obs : observers) obs->on_start(s);
  std::optional<StopReason> stop;
  long taken = 0;
  while (!stop && taken < max_steps) {
    apply_step(s, rng);
    ++taken;
    for (Observer* obs : observers) {
      auto r = obs->after_step(s);
      if (r && !stop) stop = r;
    }
  }
  rec.steps = taken;
  rec.final_position = s.position;
  rec.stop = stop.value_or(StopReason::budget);
  for (Observer* obs : observers) obs->finalize(rec);
  return rec;
}

NormBoundaryObserver::NormBoundaryObserver(const Graph& g, int threshold)
    : g_(&g), threshold_(threshold) {
  if (!g.has_coordinates())
    throw std::invalid_argument("norm boundary: graph has no coordinates");
}

std::optional<StopReason> NormBoundaryObserver::after_step(const WalkerState& s) {
  if (g_->l1_norm(s.position) >= threshold_) return StopReason::boundary;
  return std::nullopt;
}

NormTracker::NormTracker(const Graph& g) : g_(&g) {
  if (!g.has_coordinates())
    throw std::invalid_argument("norm tracker: graph has no coordinates");
}

void NormTracker::on_start(const WalkerState& s) {
  max_norm_ = g_->l1_norm(s.position);
}

std::optional<StopReason> NormTracker::after_step(const WalkerState& s) {
  max_norm_ = std::max(max_norm_, g_->l1_norm(s.position));
  return std::nullopt;
}

void NormTracker::finalize(TrialRecord& rec) const {
  rec.metrics["max_l1_norm"] = max_norm_;
}

}  // namespace derw
