#include "derw/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <type_traits>

namespace derw {

using nlohmann::ordered_json;

std::string format10(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double round10(double x) { return std::strtod(format10(x).c_str(), nullptr); }

namespace {

ordered_json num(double x) { return round10(x); }

ordered_json num_list(const std::vector<double>& xs) {
  ordered_json a = ordered_json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

template <typename K, typename V>
ordered_json map_to_object(const std::map<K, V>& m) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, v] : m) {
    if constexpr (std::is_same_v<K, std::string>)
      o[k] = v;
    else
      o[std::to_string(k)] = v;
  }
  return o;
}

}  // namespace

ordered_json to_json(const TrapCertificate& cert) {
  ordered_json o;
  o["circuit"] = cert.circuit.canonical().vertices;
  o["direction"] = cert.circuit.vertices;
  o["m"] = cert.first_trap_time;
  o["k"] = cert.turns_observed;
  o["M"] = cert.gap_at_detection;
  o["residual_bound"] = num(cert.residual);
  return o;
}

ordered_json to_json(const TrialRecord& rec) {
  ordered_json o;
  o["start"] = rec.start;
  o["final_position"] = rec.final_position;
  o["steps"] = rec.steps;
  o["stop"] = to_string(rec.stop);
  o["certificate"] = rec.certificate ? to_json(*rec.certificate)
                                     : ordered_json(nullptr);
  ordered_json metrics = ordered_json::object();
  for (const auto& [name, value] : rec.metrics) metrics[name] = num(value);
  o["metrics"] = metrics;
  return o;
}

ordered_json to_json(const CouplingReport& rep) {
  ordered_json o;
  o["full_walk"] = to_json(rep.full_walk);
  ordered_json walkers = ordered_json::array();
  for (const CoupledWalkerOutcome& w : rep.walkers) {
    ordered_json wo;
    wo["radius"] = w.radius;
    wo["sigma"] = w.sigma;
    wo["prefix_ok"] = w.prefix_ok;
    wo["steps"] = w.steps;
    wo["stop"] = to_string(w.stop);
    wo["certificate"] =
        w.certificate ? to_json(*w.certificate) : ordered_json(nullptr);
    walkers.push_back(wo);
  }
  o["walkers"] = walkers;
  return o;
}

ordered_json to_json(const ExperimentSpec& spec) {
  ordered_json o;
  o["kind"] = to_string(spec.kind);
  o["graph"] = spec.graph_spec;
  o["beta"] = num(spec.beta);
  o["trials"] = spec.trials;
  o["max_steps"] = spec.max_steps;
  o["epsilon"] = num(spec.epsilon);
  o["seed"] = spec.seed;
  if (!spec.radii.empty()) o["radii"] = spec.radii;
  if (spec.kind == ExperimentKind::turn_bound) o["max_turns"] = spec.max_turns;
  if (spec.kind == ExperimentKind::renewal)
    o["max_renewals"] = spec.max_renewals;
  o["jobs"] = spec.jobs;
  return o;
}

ordered_json field_to_json(const CrossingField& field) {
  ordered_json o = ordered_json::object();
  for (const auto& [u, v, c] : field.nonzero_entries())
    o[std::to_string(u) + "-" + std::to_string(v)] = c;
  return o;
}

namespace {

ordered_json trial_summary_json(const TrialSummary& s) {
  ordered_json o;
  o["trials"] = s.trials;
  o["stop_counts"] = map_to_object(s.stop_counts);
  o["trapped_fraction"] = num(s.trapped_fraction);
  o["trapped_se"] = num(s.trapped_se);
  o["trap_time_quantiles"] = map_to_object(s.trap_time_quantiles);
  o["circuit_length_histogram"] = map_to_object(s.circuit_length_histogram);
  o["total_turns"] = s.total_turns;
  o["gap_increment_histogram"] = map_to_object(s.gap_increment_histogram);
  return o;
}

}  // namespace

ordered_json to_json(const SummaryStats& stats) {
  ordered_json o;
  o["kind"] = to_string(stats.kind);
  if (const auto* s = std::get_if<TrialSummary>(&stats.data)) {
    o.update(trial_summary_json(*s));
  } else if (const auto* s = std::get_if<LlnStats>(&stats.data)) {
    o["trials"] = s->trials;
    o["steps"] = s->steps;
    o["mean_abs_velocity"] = num(s->mean_abs_velocity);
    o["se_abs_velocity"] = num(s->se_abs_velocity);
    o["mean_velocity"] = num(s->mean_velocity);
    o["positive_fraction"] = num(s->positive_fraction);
    o["positive_se"] = num(s->positive_se);
  } else if (const auto* s = std::get_if<TurnBoundStats>(&stats.data)) {
    o["trials"] = s->trials;
    o["ell"] = s->ell;
    o["degree"] = s->degree;
    o["max_turns"] = s->max_turns;
    o["turns_histogram"] = s->turns_histogram;
    o["frequency_at_least"] = num_list(s->frequency_at_least);
    o["bound_at_least"] = num_list(s->bound_at_least);
    o["standard_errors"] = num_list(s->standard_errors);
  } else if (const auto* s = std::get_if<EscapeDecayStats>(&stats.data)) {
    o["radii"] = s->radii;
    o["escape_counts"] = s->escape_counts;
    o["escape_frequencies"] = num_list(s->escape_frequencies);
    o["standard_errors"] = num_list(s->standard_errors);
    o["log_slope"] = num(s->log_slope);
    o["summary"] = trial_summary_json(s->summary);
  } else if (const auto* s = std::get_if<RenewalReport>(&stats.data)) {
    o["trials"] = s->trials;
    o["plans_started"] = s->plans_started;
    o["successes"] = s->successes;
    o["censored_steps"] = s->censored_steps;
    o["censored_renewals"] = s->censored_renewals;
    o["per_renewal_success"] = num(s->per_renewal_success);
    o["renewal_histogram"] = s->renewal_histogram;
  } else if (const auto* s = std::get_if<CouplingStats>(&stats.data)) {
    o["radii"] = s->radii;
    o["trials"] = s->trials;
    o["all_prefixes_match"] = s->all_prefixes_match;
    o["sigma_reached"] = s->sigma_reached;
    o["mean_sigma"] = num_list(s->mean_sigma);
    o["sub_trapped"] = s->sub_trapped;
    o["full_trapped"] = s->full_trapped;
  } else if (const auto* s = std::get_if<OneDimEquivStats>(&stats.data)) {
    o["trajectories"] = s->trajectories;
    o["steps_checked"] = s->steps_checked;
    o["max_transition_diff"] = num(s->max_transition_diff);
    o["tolerance"] = num(s->tolerance);
    o["fields_match"] = s->fields_match;
    o["pass"] = s->pass;
  }
  return o;
}

void TraceObserver::on_start(const WalkerState& s) {
  prev_ = s.position;
  n_ = 0;
}

std::optional<StopReason> TraceObserver::after_step(const WalkerState& s) {
  ++n_;
  ordered_json line;
  line["n"] = n_;
  line["from"] = prev_;
  line["to"] = s.position;
  line["crossing_after"] = s.field.crossing(prev_, s.position);
  *out_ << line.dump() << '\n';
  prev_ = s.position;
  return std::nullopt;
}

}  // namespace derw
