#pragma once

#include <vector>

#include "derw/walker.hpp"

namespace derw {

enum class PlanCase {
  heavy_inside,    // heavy set nonempty, walk on it: good-edge walk
  heavy_outside,   // heavy set nonempty, walk off it: shortest path there first
  fresh_to_cstar,  // heavy set empty, walk off the reference circuit
  fresh_on_cstar,  // heavy set empty, walk on the reference circuit
};
const char* to_string(PlanCase c);

// Eventually periodic target path prefix + cycle + cycle + ...; the first
// vertex (prefix front, or cycle front when the prefix is empty) is the
// position the plan was built at.
struct AuxiliaryPlan {
  PlanCase case_tag;
  std::vector<Vertex> prefix;
  Circuit cycle;
  Circuit reference_circuit;   // C* for the fresh cases, the cycle itself otherwise
  int heavy_entry_index = -1;  // path index where the good-edge walk begins; -1 fresh
  int ties_encountered = 0;    // good-edge ties resolved by smallest id

  Vertex at(long i) const {
    long p = static_cast<long>(prefix.size());
    return i < p ? prefix[static_cast<std::size_t>(i)] : cycle.at(i - p);
  }
};

// Builds the trap-seeking plan from the current state. With a nonempty heavy
// set the plan walks to it if needed and then repeatedly extends by the
// smallest-id good edge, replaying field updates, until a vertex repeats;
// the repeated segment is the cycle. With an empty heavy set the plan walks
// to the given reference circuit and spins it in the given orientation.
// The graph must contain a circuit (not a tree).
AuxiliaryPlan build_auxiliary_plan(const WalkerState& s, const Circuit& c_star);

// Replays the plan's path from the state's field (prefix, then two full
// cycles). For the heavy cases, checks that from the heavy entry onwards no
// step backtracks (Y_{j+1} == Y_{j-1}) and every edge walked is a good edge
// of crossing >= 1 at the moment it is traversed. Fresh-case plans are
// vacuously true.
bool verify_non_backtracking(const AuxiliaryPlan& plan, const WalkerState& s);

}  // namespace derw
