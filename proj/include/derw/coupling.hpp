#pragma once

#include <optional>
#include <span>
#include <vector>

#include "derw/trapping.hpp"
#include "derw/walker.hpp"

namespace derw {

struct CoupledWalkerOutcome {
  int radius = 0;
  long sigma = -1;       // first time the full walk hits l1 norm == radius; -1 never
  bool prefix_ok = true; // positions agreed at every shared step
  long steps = 0;
  StopReason stop = StopReason::budget;
  std::optional<TrapCertificate> certificate;
};

struct CouplingReport {
  TrialRecord full_walk;
  std::vector<CoupledWalkerOutcome> walkers;
};

// Couples the walk on an l1 ball with one walk per radius r on the sub-ball
// of that radius: each coupled walk consumes the same quantile as the full
// walk (on its own graph and field) until the full walk first reaches l1
// norm r, and evolves with an independent substream afterwards. Sub-ball
// vertex ids coincide with the full ball's by construction; the interior
// adjacency is re-checked here. Every walker carries its own trap observer.
CouplingReport coupled_run(const Graph& ball, std::span<const int> radii,
                           double beta, RngStream rng, long max_steps,
                           double epsilon);

}  // namespace derw
