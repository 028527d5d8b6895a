#include "derw/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "derw/one_dim.hpp"
#include "derw/trapping.hpp"

namespace derw {

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::trap_census: return "trap_census";
    case ExperimentKind::lln: return "lln";
    case ExperimentKind::turn_bound: return "turn_bound";
    case ExperimentKind::escape_decay: return "escape_decay";
    case ExperimentKind::renewal: return "renewal";
    case ExperimentKind::coupling: return "coupling";
    case ExperimentKind::oned_equiv: return "oned_equiv";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (ExperimentKind k :
       {ExperimentKind::trap_census, ExperimentKind::lln,
        ExperimentKind::turn_bound, ExperimentKind::escape_decay,
        ExperimentKind::renewal, ExperimentKind::coupling,
        ExperimentKind::oned_equiv})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown experiment kind: " + s);
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("spec: trials must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("spec: epsilon must be in (0, 1)");
  if (max_steps < 0) throw std::invalid_argument("spec: max_steps must be >= 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("spec: beta must be >= 0");
  if (jobs < 1) throw std::invalid_argument("spec: jobs must be >= 1");
  if (kind == ExperimentKind::escape_decay || kind == ExperimentKind::coupling) {
    if (radii.empty())
      throw std::invalid_argument("spec: this experiment needs --radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] < 1)
        throw std::invalid_argument("spec: radii must be positive");
      if (i > 0 && radii[i] <= radii[i - 1])
        throw std::invalid_argument("spec: radii must be strictly ascending");
    }
  }
  if (kind == ExperimentKind::turn_bound && max_turns < 1)
    throw std::invalid_argument("spec: max_turns must be >= 1");
  if (kind == ExperimentKind::renewal && max_renewals < 0)
    throw std::invalid_argument("spec: max_renewals must be >= 0");
}

namespace {

double binomial_se(double p, long n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

long quantile_value(const std::vector<long>& sorted, double q) {
  auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size()));
  if (idx >= sorted.size()) idx = sorted.size() - 1;
  return sorted[idx];
}

}  // namespace

TrialSummary summarize(std::span<const TrialRecord> records) {
  if (records.empty())
    throw std::invalid_argument("summarize: no records");
  TrialSummary out;
  out.trials = static_cast<long>(records.size());
  std::vector<long> trap_times;
  for (const TrialRecord& r : records) {
    ++out.stop_counts[to_string(r.stop)];
    if (r.certificate) {
      const TrapCertificate& c = *r.certificate;
      trap_times.push_back(c.first_trap_time);
      ++out.circuit_length_histogram[c.circuit.length()];
      out.total_turns += c.turns_observed;
      for (int inc : c.gap_increments) ++out.gap_increment_histogram[inc];
    }
  }
  out.trapped_fraction =
      static_cast<double>(trap_times.size()) / static_cast<double>(out.trials);
  out.trapped_se = binomial_se(out.trapped_fraction, out.trials);
  if (!trap_times.empty()) {
    std::sort(trap_times.begin(), trap_times.end());
    out.trap_time_quantiles["p50"] = quantile_value(trap_times, 0.50);
    out.trap_time_quantiles["p90"] = quantile_value(trap_times, 0.90);
    out.trap_time_quantiles["p99"] = quantile_value(trap_times, 0.99);
    out.trap_time_quantiles["max"] = trap_times.back();
  }
  return out;
}

std::vector<TrialRecord> run_trials(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.kind != ExperimentKind::trap_census &&
      spec.kind != ExperimentKind::escape_decay)
    throw std::invalid_argument("run_trials: experiment kind has no per-trial records");
  Graph g = Graph::from_spec(spec.graph_spec);

  std::vector<TrialRecord> records(static_cast<std::size_t>(spec.trials));
  int jobs = static_cast<int>(
      std::min<long>(spec.jobs, spec.trials));
  std::vector<std::string> errors(static_cast<std::size_t>(jobs));

  auto work = [&](int w) {
    try {
      for (long t = w; t < spec.trials; t += jobs) {
        RngStream rng(spec.seed, static_cast<std::uint64_t>(t));
        WalkerState s(g, g.origin(), spec.beta);
        TrapObserver trap(g, spec.beta, spec.epsilon);
        std::optional<NormTracker> norm;
        std::vector<Observer*> obs{&trap};
        if (g.has_coordinates()) obs.push_back(&norm.emplace(g));
        records[static_cast<std::size_t>(t)] =
            run_walk(s, rng, spec.max_steps, obs);
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(w)] = e.what();
    }
  };

  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const std::string& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return records;
}

namespace {

SummaryStats run_lln(const ExperimentSpec& spec) {
  OneDimModel m{spec.beta};
  LlnStats st;
  st.trials = spec.trials;
  st.steps = spec.max_steps;
  long positive = 0;
  std::vector<double> abs_velocities;
  abs_velocities.reserve(static_cast<std::size_t>(spec.trials));
  double sum_v = 0.0;
  for (long t = 0; t < spec.trials; ++t) {
    RngStream rng(spec.seed, static_cast<std::uint64_t>(t));
    long long x = one_dim_walk(m, spec.max_steps, rng);
    double v = static_cast<double>(x) / static_cast<double>(spec.max_steps);
    sum_v += v;
    abs_velocities.push_back(std::abs(v));
    if (x > 0) ++positive;
  }
  double n = static_cast<double>(spec.trials);
  st.mean_velocity = sum_v / n;
  double mean_abs = 0.0;
  for (double v : abs_velocities) mean_abs += v;
  mean_abs /= n;
  st.mean_abs_velocity = mean_abs;
  if (spec.trials > 1) {
    double ss = 0.0;
    for (double v : abs_velocities) ss += (v - mean_abs) * (v - mean_abs);
    st.se_abs_velocity = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  st.positive_fraction = static_cast<double>(positive) / n;
  st.positive_se = binomial_se(st.positive_fraction, spec.trials);
  return SummaryStats{spec.kind, st};
}

SummaryStats run_turn_bound(const ExperimentSpec& spec, const Graph& g) {
  Circuit circuit = first_circuit(g);
  TurnBoundStats st;
  st.trials = spec.trials;
  st.ell = circuit.length();
  st.degree = g.max_degree();
  st.max_turns = spec.max_turns;
  st.turns_histogram.assign(static_cast<std::size_t>(spec.max_turns) + 1, 0);
  Vertex root = circuit.vertices.front();
  long horizon = static_cast<long>(st.ell) * spec.max_turns;
  for (long t = 0; t < spec.trials; ++t) {
    RngStream rng(spec.seed, static_cast<std::uint64_t>(t));
    WalkerState s(g, root, spec.beta);
    long matched = 0;
    for (long i = 1; i <= horizon; ++i) {
      if (apply_step(s, rng) != circuit.at(i)) break;
      ++matched;
    }
    ++st.turns_histogram[static_cast<std::size_t>(matched / st.ell)];
  }
  long at_least = spec.trials;
  for (int k = 1; k <= spec.max_turns; ++k) {
    at_least -= st.turns_histogram[static_cast<std::size_t>(k) - 1];
    double f = static_cast<double>(at_least) / static_cast<double>(spec.trials);
    st.frequency_at_least.push_back(f);
    st.bound_at_least.push_back(
        turn_probability_lower_bound(st.ell, st.degree, 0.0, k, spec.beta));
    st.standard_errors.push_back(binomial_se(f, spec.trials));
  }
  return SummaryStats{spec.kind, st};
}

EscapeDecayStats escape_stats(const ExperimentSpec& spec,
                              std::span<const TrialRecord> records) {
  EscapeDecayStats st;
  st.radii.assign(spec.radii.begin(), spec.radii.end());
  st.escape_counts.assign(st.radii.size(), 0);
  for (const TrialRecord& r : records) {
    auto it = r.metrics.find("max_l1_norm");
    if (it == r.metrics.end())
      throw std::runtime_error("escape_decay: record lacks max_l1_norm");
    for (std::size_t i = 0; i < st.radii.size(); ++i)
      if (it->second >= static_cast<double>(st.radii[i])) ++st.escape_counts[i];
  }
  double n = static_cast<double>(records.size());
  for (std::size_t i = 0; i < st.radii.size(); ++i) {
    double f = static_cast<double>(st.escape_counts[i]) / n;
    st.escape_frequencies.push_back(f);
    st.standard_errors.push_back(binomial_se(f, static_cast<long>(records.size())));
  }
  // log-linear fit over the radii that were reached at all
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long pts = 0;
  for (std::size_t i = 0; i < st.radii.size(); ++i) {
    if (st.escape_frequencies[i] <= 0.0) continue;
    double x = st.radii[i];
    double y = std::log(st.escape_frequencies[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++pts;
  }
  if (pts >= 2) {
    double denom = pts * sxx - sx * sx;
    if (denom != 0.0) st.log_slope = (pts * sxy - sx * sy) / denom;
  }
  st.summary = summarize(records);
  return st;
}

SummaryStats run_coupling(const ExperimentSpec& spec, const Graph& g) {
  CouplingStats st;
  st.radii.assign(spec.radii.begin(), spec.radii.end());
  st.trials = spec.trials;
  st.sigma_reached.assign(st.radii.size(), 0);
  st.mean_sigma.assign(st.radii.size(), 0.0);
  st.sub_trapped.assign(st.radii.size(), 0);
  std::vector<double> sigma_sum(st.radii.size(), 0.0);
  for (long t = 0; t < spec.trials; ++t) {
    CouplingReport rep =
        coupled_run(g, spec.radii, spec.beta,
                    RngStream(spec.seed, static_cast<std::uint64_t>(t)),
                    spec.max_steps, spec.epsilon);
    if (rep.full_walk.stop == StopReason::trapped) ++st.full_trapped;
    for (std::size_t i = 0; i < rep.walkers.size(); ++i) {
      const CoupledWalkerOutcome& w = rep.walkers[i];
      st.all_prefixes_match = st.all_prefixes_match && w.prefix_ok;
      if (w.sigma >= 0) {
        ++st.sigma_reached[i];
        sigma_sum[i] += static_cast<double>(w.sigma);
      }
      if (w.stop == StopReason::trapped) ++st.sub_trapped[i];
    }
  }
  for (std::size_t i = 0; i < st.radii.size(); ++i)
    if (st.sigma_reached[i] > 0)
      st.mean_sigma[i] = sigma_sum[i] / static_cast<double>(st.sigma_reached[i]);
  return SummaryStats{spec.kind, st};
}

SummaryStats run_oned_equiv(const ExperimentSpec& spec, const Graph& g) {
  if (!g.has_coordinates() || g.max_degree() > 2)
    throw std::invalid_argument("oned_equiv: graph must be a coordinate path");
  OneDimModel m{spec.beta};
  OneDimEquivStats st;
  st.trajectories = spec.trials;
  int half = g.radius();
  for (long t = 0; t < spec.trials; ++t) {
    RngStream rng(spec.seed, static_cast<std::uint64_t>(t));
    WalkerState s(g, g.origin(), spec.beta);
    std::vector<Vertex> traj{s.position};
    for (long i = 0; i < spec.max_steps; ++i) {
      int x = g.coordinate(s.position)[0];
      TransitionDistribution dist = transition_distribution(s);
      auto [pr, pl] = one_dim_transition(m, x);
      double diff = std::max(std::abs(dist[0].second - pl),
                             std::abs(dist[1].second - pr));
      st.max_transition_diff = std::max(st.max_transition_diff, diff);
      // one more step could land on an end vertex, where the two-neighbor
      // closed form no longer applies
      if (std::abs(x) >= half - 1) break;
      apply_step(s, rng);
      traj.push_back(s.position);
      ++st.steps_checked;
      if (!(one_dim_expected_field(g, traj) == s.field)) st.fields_match = false;
    }
  }
  st.pass = st.fields_match && st.max_transition_diff <= st.tolerance;
  return SummaryStats{spec.kind, st};
}

}  // namespace

SummaryStats summarize_records(const ExperimentSpec& spec,
                               std::span<const TrialRecord> records) {
  switch (spec.kind) {
    case ExperimentKind::trap_census:
      return SummaryStats{spec.kind, summarize(records)};
    case ExperimentKind::escape_decay:
      return SummaryStats{spec.kind, escape_stats(spec, records)};
    default:
      throw std::invalid_argument(
          "summarize_records: experiment kind has no per-trial records");
  }
}

SummaryStats run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ExperimentKind::trap_census:
    case ExperimentKind::escape_decay:
      return summarize_records(spec, run_trials(spec));
    case ExperimentKind::lln:
      return run_lln(spec);
    case ExperimentKind::turn_bound:
      return run_turn_bound(spec, Graph::from_spec(spec.graph_spec));
    case ExperimentKind::renewal:
      return SummaryStats{
          spec.kind,
          renewal_experiment(Graph::from_spec(spec.graph_spec), spec.beta,
                             spec.seed, spec.trials, spec.max_renewals,
                             spec.max_steps, spec.epsilon)};
    case ExperimentKind::coupling:
      return run_coupling(spec, Graph::from_spec(spec.graph_spec));
    case ExperimentKind::oned_equiv:
      return run_oned_equiv(spec, Graph::from_spec(spec.graph_spec));
  }
  throw std::logic_error("run_experiment: unhandled kind");
}

void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records,
                     std::uint64_t seed) {
  out << "trial,seed,stop_reason,steps,circuit_len,trap_time,gap_M,residual_bound\n";
  char buf[64];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrialRecord& r = records[i];
    out << i << ',' << seed << ',' << to_string(r.stop) << ',' << r.steps << ',';
    if (r.certificate) {
      const TrapCertificate& c = *r.certificate;
      std::snprintf(buf, sizeof buf, "%.10g", c.residual);
      out << c.circuit.length() << ',' << c.first_trap_time << ','
          << c.gap_at_detection << ',' << buf;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

}  // namespace derw
