#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "derw/coupling.hpp"
#include "derw/graph.hpp"
#include "derw/renewal.hpp"
#include "derw/walker.hpp"

namespace derw {

enum class ExperimentKind {
  trap_census,   // walks with a trap observer; trapped fraction etc.
  lln,           // velocity samples on the integer line (closed-form model)
  turn_bound,    // consecutive turns around the smallest circuit, fresh field
  escape_decay,  // frequency of reaching each l1 radius on a lattice ball
  renewal,       // plan-rebuild scheme, per-plan success statistics
  coupling,      // full-ball walk coupled with one walker per sub-ball
  oned_equiv,    // engine vs closed form on a path graph, exact comparison
};
const char* to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::trap_census;
  std::string graph_spec = "cycle:3";
  double beta = 1.0;
  long trials = 1;
  long max_steps = 100000;
  double epsilon = 1e-6;
  std::uint64_t seed = 0;
  std::vector<int> radii;    // escape_decay, coupling
  int max_turns = 8;         // turn_bound
  long max_renewals = 1000;  // renewal
  int jobs = 1;              // trial parallelism for record-producing kinds

  void validate() const;  // throws invalid_argument listing the first problem
};

// Aggregate over a homogeneous batch of trial records.
struct TrialSummary {
  long trials = 0;
  std::map<std::string, long> stop_counts;  // by stop reason, sums to trials
  double trapped_fraction = 0.0;
  double trapped_se = 0.0;  // sqrt(p (1-p) / n)
  // Over trapped runs: onset quantiles and the certified-turn total.
  std::map<std::string, long> trap_time_quantiles;  // p50, p90, p99, max
  std::map<int, long> circuit_length_histogram;
  long total_turns = 0;
  std::map<int, long> gap_increment_histogram;  // per-turn gap growth values
};

// Throws invalid_argument on an empty batch.
TrialSummary summarize(std::span<const TrialRecord> records);

struct LlnStats {
  long trials = 0;
  long steps = 0;
  double mean_abs_velocity = 0.0;
  double se_abs_velocity = 0.0;  // sample standard error of the mean
  double mean_velocity = 0.0;
  double positive_fraction = 0.0;
  double positive_se = 0.0;
};

struct TurnBoundStats {
  long trials = 0;
  int ell = 0;     // circuit length followed
  int degree = 0;  // degree bound used in the reference bound
  int max_turns = 0;
  std::vector<long> turns_histogram;       // [k]: trials with exactly k turns
  std::vector<double> frequency_at_least;  // [k-1]: share with >= k turns
  std::vector<double> bound_at_least;      // matching product lower bounds
  std::vector<double> standard_errors;
};

struct EscapeDecayStats {
  std::vector<int> radii;
  std::vector<long> escape_counts;  // walks whose max l1 norm reached r
  std::vector<double> escape_frequencies;
  std::vector<double> standard_errors;
  // Least-squares slope of log frequency against radius over the nonzero
  // frequencies; 0 when fewer than two points remain.
  double log_slope = 0.0;
  TrialSummary summary;
};

struct CouplingStats {
  std::vector<int> radii;
  long trials = 0;
  bool all_prefixes_match = true;
  std::vector<long> sigma_reached;  // per radius: full walk hit that norm
  std::vector<double> mean_sigma;   // over those trials, 0 when none
  std::vector<long> sub_trapped;    // per radius: sub-walker certified
  long full_trapped = 0;
};

struct OneDimEquivStats {
  long trajectories = 0;
  long steps_checked = 0;
  double max_transition_diff = 0.0;
  double tolerance = 1e-12;
  bool fields_match = true;
  bool pass = false;
};

struct SummaryStats {
  ExperimentKind kind = ExperimentKind::trap_census;
  std::variant<TrialSummary, LlnStats, TurnBoundStats, EscapeDecayStats,
               RenewalReport, CouplingStats, OneDimEquivStats>
      data;
};

// Runs the whole experiment; deterministic for fixed spec fields (trial t
// draws from RngStream(seed, t); aggregation order is fixed regardless of
// jobs).
SummaryStats run_experiment(const ExperimentSpec& spec);

// The raw records behind the record-producing kinds (trap_census,
// escape_decay): one walk per trial with a trap observer, plus a norm tracker
// on coordinate graphs. Other kinds have no per-trial records and throw.
std::vector<TrialRecord> run_trials(const ExperimentSpec& spec);

// Aggregation half of the record-producing kinds, for callers that already
// hold the records (e.g. after writing them to CSV).
SummaryStats summarize_records(const ExperimentSpec& spec,
                               std::span<const TrialRecord> records);

// One row per record: trial, seed, stop_reason, steps, circuit_len,
// trap_time, gap_M, residual_bound (certificate columns empty when untrapped).
void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records,
                     std::uint64_t seed);

}  // namespace derw
