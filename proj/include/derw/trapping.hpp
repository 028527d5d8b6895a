#pragma once

#include <memory>
#include <optional>
#include <span>

#include "derw/bounds.hpp"
#include "derw/walker.hpp"

namespace derw {

struct TurnDetection {
  Circuit circuit;  // rooted at the start of the periodic suffix, as walked
  long start_time = 0;
  long turns = 0;
};

// Largest k such that the trajectory suffix equals k full turns around some
// circuit: positions start_time..end are periodic with the circuit's length,
// one period holds distinct vertices, and the suffix ends back at its root.
// Ties between period lengths go to the shorter period. Empty result when no
// complete turn ends the trajectory.
std::optional<TurnDetection> detect_turns(std::span<const Vertex> trajectory);

// All circuits of length 3..max_len up to rotation and reflection, each in
// canonical form (smallest vertex first, lex-smaller direction), ordered by
// (length, vertex sequence). Throws once more than `cap` circuits are found.
std::vector<Circuit> enumerate_circuits(const Graph& g, int max_len,
                                        long cap = 1000000);

// Watches a walk for trapping. Cheap per step: a vertex revisit at distance
// l >= 3 proposes the just-completed loop as a candidate circuit; while the
// walk keeps following the candidate, each completed turn re-evaluates the
// circuit gap M and certifies (stop reason trapped) once
// residual_escape_bound(l, D, M, beta) <= epsilon.
//
// The certificate records the onset of the observed periodic suffix, the
// turns seen since, the gap at onset (reconstructed exactly by undoing one
// lap) and the gap increment of every completed turn.
class TrapObserver : public Observer {
public:
  TrapObserver(const Graph& g, double beta, double epsilon);

  void on_start(const WalkerState& s) override;
  std::optional<StopReason> after_step(const WalkerState& s) override;
  void finalize(TrialRecord& rec) const override;

  const std::optional<TrapCertificate>& certificate() const { return cert_; }

private:
  void push(long t, Vertex v);
  Vertex ring_at(long t) const;
  bool try_candidate(const WalkerState& s, long t, Vertex v);
  std::optional<StopReason> turn_completed(const WalkerState& s);

  const Graph* g_;
  double beta_;
  double epsilon_;
  long ring_capacity_;
  std::vector<Vertex> ring_;
  std::vector<long> last_seen_;

  struct Tracking {
    Circuit circuit;  // rooted at onset, orientation as walked
    long onset = 0;
    long turns = 0;
    int gap_onset = 0;
    int prev_gap = 0;
    std::vector<int> increments;
  };
  std::optional<Tracking> tracking_;
  std::optional<TrapCertificate> cert_;
};

std::unique_ptr<Observer> make_trap_observer(const Graph& g, double beta,
                                             double epsilon);

}  // namespace derw
