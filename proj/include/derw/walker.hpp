#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "derw/crossing_field.hpp"
#include "derw/graph.hpp"
#include "derw/rng.hpp"
#include "derw/trap_certificate.hpp"

namespace derw {

enum class StopReason { budget, trapped, boundary, custom };
const char* to_string(StopReason r);

struct WalkerState {
  const Graph* graph;
  double beta;
  Vertex start;
  Vertex position;
  long step_count = 0;
  CrossingField field;

  // beta = 0 is accepted and degenerates to the simple random walk.
  WalkerState(const Graph& g, Vertex start_vertex, double beta);
};

using TransitionDistribution = std::vector<std::pair<Vertex, double>>;

// Distribution of the next position: over the sorted neighbors v of the
// current one, proportional to exp(beta * crossing(position, v)).
//
// The maximal crossing is subtracted before exponentiating, so no crossing
// magnitude can overflow (naively, exp(beta*c) overflows once c exceeds about
// 700/beta). Neighbors whose crossing trails the maximum by more than about
// 700/beta underflow to probability zero; the discarded mass is below 1e-300.
TransitionDistribution transition_distribution(const WalkerState& s);

// One step driven by a uniform [0,1) quantile: inverse CDF over the sorted
// neighbor order. Updates position, field and step_count; returns the new
// position.
Vertex apply_step(WalkerState& s, double quantile);
Vertex apply_step(WalkerState& s, RngStream& rng);

struct TrialRecord {
  Vertex start = 0;
  Vertex final_position = 0;
  long steps = 0;
  StopReason stop = StopReason::budget;
  std::optional<TrapCertificate> certificate;
  std::map<std::string, double> metrics;
};

class Observer {
public:
  virtual ~Observer() = default;
  virtual void on_start(const WalkerState&) {}
  // Called after each step; returning a reason stops the run.
  virtual std::optional<StopReason> after_step(const WalkerState&) = 0;
  virtual void finalize(TrialRecord&) const {}
};

// Steps until an observer stops the run or max_steps is exhausted (stop
// reason budget). max_steps = 0 performs no steps.
TrialRecord run_walk(WalkerState& s, RngStream& rng, long max_steps,
                     std::span<Observer* const> observers = {});

// Stops with reason boundary when the walk reaches l1 norm >= threshold
// (graph must carry lattice coordinates).
class NormBoundaryObserver : public Observer {
public:
  NormBoundaryObserver(const Graph& g, int threshold);
  std::optional<StopReason> after_step(const WalkerState& s) override;

private:
  const Graph* g_;
  int threshold_;
};

// Records the maximum l1 norm reached, as metric "max_l1_norm".
class NormTracker : public Observer {
public:
  explicit NormTracker(const Graph& g);
  void on_start(const WalkerState& s) override;
  std::optional<StopReason> after_step(const WalkerState& s) override;
  void finalize(TrialRecord& rec) const override;
  int max_norm() const { return max_norm_; }

private:
  const Graph* g_;
  int max_norm_ = 0;
};

}  // namespace derw
