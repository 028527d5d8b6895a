#pragma once

#include <cstdint>
#include <vector>

#include "derw/auxiliary_plan.hpp"
#include "derw/graph.hpp"
#include "derw/rng.hpp"
#include "derw/walker.hpp"

namespace derw {

// Smallest circuit class of the graph: the first result of circuit
// enumeration at the least length that has one. Throws invalid_argument on a
// tree.
Circuit first_circuit(const Graph& g);

// The orientation of c (canonical or its reverse) whose circuit gap under the
// current field is larger; canonical on a tie. A plan spinning this
// orientation points with the crossings already laid down instead of against
// them.
Circuit orient_by_gap(const CrossingField& field, const Circuit& c);

struct RenewalTrial {
  long plans_started = 0;
  bool success = false;      // trap-certified while holding a plan
  long successful_plan = -1; // 0-based index of the plan held at certification
  long steps = 0;
  // trapped on success, budget when steps ran out, custom when a deviation
  // occurred with no plan rebuilds left.
  StopReason stop = StopReason::budget;
};

// One walk under the plan-rebuild scheme: a plan is built at time 0 and
// rebuilt from the current state at every step that deviates from it, up to
// max_renewals plans in total. The trial succeeds when the trap observer
// certifies the walk; the plan current at that moment is the successful one.
// max_renewals = 0 builds no plans and runs no walk.
RenewalTrial renewal_trial(const Graph& g, double beta, RngStream& rng,
                           long max_renewals, long max_steps, double epsilon);

struct RenewalReport {
  long trials = 0;
  long plans_started = 0;
  long successes = 0;
  long censored_steps = 0;    // step budget exhausted
  long censored_renewals = 0; // plan budget exhausted
  double per_renewal_success = 0.0;     // successes / plans_started, 0 if none
  std::vector<long> renewal_histogram; // [k]: successes whose plan index was k
};

// Aggregates `trials` independent trials, trial t drawing from
// RngStream(seed, t). max_renewals = 0 reports empty statistics.
RenewalReport renewal_experiment(const Graph& g, double beta,
                                 std::uint64_t seed, long trials,
                                 long max_renewals, long max_steps,
                                 double epsilon);

}  // namespace derw
