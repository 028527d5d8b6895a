#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "derw/coupling.hpp"
#include "derw/crossing_field.hpp"
#include "derw/montecarlo.hpp"
#include "derw/trap_certificate.hpp"
#include "derw/walker.hpp"

namespace derw {

// Every reported float goes through a fixed 10-significant-digit rendering,
// so serialized output is byte-identical across platforms.
std::string format10(double x);
double round10(double x);  // the value format10 reads back

// Wire form {circuit, direction, m, k, M, residual_bound}: undirected
// canonical class, the directed sequence actually walked, onset time, turns
// observed, gap at certification, residual escape bound.
nlohmann::ordered_json to_json(const TrapCertificate& cert);
nlohmann::ordered_json to_json(const TrialRecord& rec);
nlohmann::ordered_json to_json(const CouplingReport& rep);
nlohmann::ordered_json to_json(const ExperimentSpec& spec);
nlohmann::ordered_json to_json(const SummaryStats& stats);

// Nonzero entries keyed "u-v" (u < v), in edge order.
nlohmann::ordered_json field_to_json(const CrossingField& field);

// Streams one JSON line per step: {"n", "from", "to", "crossing_after"},
// where crossing_after is the crossing number of the traversed edge after
// the update. Never stops the walk.
class TraceObserver : public Observer {
public:
  explicit TraceObserver(std::ostream& out) : out_(&out) {}
  void on_start(const WalkerState& s) override;
  std::optional<StopReason> after_step(const WalkerState& s) override;

private:
  std::ostream* out_;
  Vertex prev_ = 0;
  long n_ = 0;
};

}  // namespace derw
