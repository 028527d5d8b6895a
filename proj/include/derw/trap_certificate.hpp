#pragma once

#include <vector>

#include "derw/graph.hpp"

namespace derw {

// Evidence that a run is trapped: from first_trap_time on, the trajectory is
// periodic along `circuit` (orientation as actually walked), turns_observed
// full turns were seen, and with the gap at certification time the
// probability of ever leaving the circuit is at most residual.
struct TrapCertificate {
  Circuit circuit;
  long first_trap_time = 0;
  long turns_observed = 0;
  int gap_at_detection = 0;
  double residual = 1.0;

  // Context and per-run diagnostics; not part of the wire format.
  double beta = 0.0;
  int degree_bound = 0;
  int gap_at_onset = 0;
  std::vector<int> gap_increments;  // gap growth per completed turn since onset
};

}  // namespace derw
