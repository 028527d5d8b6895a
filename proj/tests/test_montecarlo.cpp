#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "derw/json_io.hpp"
#include "derw/montecarlo.hpp"

using namespace derw;

namespace {

ExperimentSpec census_spec() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::trap_census;
  spec.graph_spec = "complete:4";
  spec.trials = 60;
  spec.max_steps = 100000;
  spec.seed = 9;
  return spec;
}

}  // namespace

TEST_CASE("experiment kinds round trip through their names") {
  for (ExperimentKind k :
       {ExperimentKind::trap_census, ExperimentKind::lln,
        ExperimentKind::turn_bound, ExperimentKind::escape_decay,
        ExperimentKind::renewal, ExperimentKind::coupling,
        ExperimentKind::oned_equiv})
    CHECK(experiment_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(experiment_kind_from_string("nope"), std::invalid_argument);
}

TEST_CASE("spec validation names the first problem") {
  ExperimentSpec spec = census_spec();
  CHECK_NOTHROW(spec.validate());

  auto broken = [&](auto&& tweak) {
    ExperimentSpec s = census_spec();
    tweak(s);
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  };
  broken([](ExperimentSpec& s) { s.trials = 0; });
  broken([](ExperimentSpec& s) { s.beta = -0.5; });
  broken([](ExperimentSpec& s) { s.epsilon = 0.0; });
  broken([](ExperimentSpec& s) { s.epsilon = 1.0; });
  broken([](ExperimentSpec& s) { s.max_steps = -1; });
  broken([](ExperimentSpec& s) { s.jobs = 0; });
  broken([](ExperimentSpec& s) {
    s.kind = ExperimentKind::escape_decay;
    s.radii = {};
  });
  broken([](ExperimentSpec& s) {
    s.kind = ExperimentKind::escape_decay;
    s.radii = {3, 3};
  });
  broken([](ExperimentSpec& s) {
    s.kind = ExperimentKind::coupling;
    s.radii = {5, 2};
  });
  broken([](ExperimentSpec& s) {
    s.kind = ExperimentKind::turn_bound;
    s.max_turns = 0;
  });
  broken([](ExperimentSpec& s) {
    s.kind = ExperimentKind::renewal;
    s.max_renewals = -1;
  });
}

TEST_CASE("trap census partitions trials across stop reasons") {
  ExperimentSpec spec = census_spec();
  std::vector<TrialRecord> records = run_trials(spec);
  REQUIRE(static_cast<long>(records.size()) == spec.trials);
  TrialSummary sum = summarize(records);
  CHECK(sum.trials == spec.trials);
  long total = 0;
  for (const auto& [reason, count] : sum.stop_counts) total += count;
  CHECK(total == spec.trials);
  CHECK(sum.trapped_fraction ==
        doctest::Approx(static_cast<double>(sum.stop_counts["trapped"]) /
                        spec.trials)
            .epsilon(1e-15));

  long trapped = sum.stop_counts["trapped"];
  CHECK(trapped > 0);
  long hist = 0;
  for (const auto& [len, count] : sum.circuit_length_histogram) {
    CHECK(len >= 3);
    hist += count;
  }
  CHECK(hist == trapped);

  if (trapped > 0) {
    CHECK(sum.trap_time_quantiles.at("p50") <= sum.trap_time_quantiles.at("p90"));
    CHECK(sum.trap_time_quantiles.at("p90") <= sum.trap_time_quantiles.at("p99"));
    CHECK(sum.trap_time_quantiles.at("p99") <= sum.trap_time_quantiles.at("max"));
  }

  long increments = 0;
  for (const auto& [inc, count] : sum.gap_increment_histogram) {
    CHECK(inc >= 1);
    CHECK(inc <= 2);
    increments += count;
  }
  CHECK(increments == sum.total_turns);
  CHECK(summarize_records(spec, records).kind == ExperimentKind::trap_census);
}

TEST_CASE("summarize rejects an empty batch") {
  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("lattice ball traps close even circuits only") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::trap_census;
  spec.graph_spec = "zdball:2,6";
  spec.trials = 40;
  spec.max_steps = 100000;
  spec.seed = 2;
  TrialSummary sum = summarize(run_trials(spec));
  REQUIRE(sum.stop_counts["trapped"] > 0);
  for (const auto& [len, count] : sum.circuit_length_histogram) {
    CHECK(len >= 4);
    CHECK(len % 2 == 0);  // the lattice is bipartite
  }
}

TEST_CASE("worker count changes nothing but the wall clock") {
  ExperimentSpec one = census_spec();
  one.trials = 80;
  ExperimentSpec four = one;
  four.jobs = 4;

  std::vector<TrialRecord> ra = run_trials(one);
  std::vector<TrialRecord> rb = run_trials(four);
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].final_position == rb[i].final_position);
    CHECK(ra[i].steps == rb[i].steps);
    CHECK(ra[i].stop == rb[i].stop);
    CHECK(ra[i].certificate.has_value() == rb[i].certificate.has_value());
    if (ra[i].certificate)
      CHECK(ra[i].certificate->gap_at_detection ==
            rb[i].certificate->gap_at_detection);
  }
}

TEST_CASE("serialized experiment output is byte-stable across runs") {
  for (ExperimentKind kind :
       {ExperimentKind::trap_census, ExperimentKind::lln,
        ExperimentKind::turn_bound, ExperimentKind::renewal}) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.graph_spec = kind == ExperimentKind::lln ? "zpath:50" : "cycle:3";
    spec.trials = 25;
    spec.max_steps = kind == ExperimentKind::lln ? 2000 : 50000;
    spec.seed = 5;
    SummaryStats a = run_experiment(spec);
    SummaryStats b = run_experiment(spec);
    CHECK(to_json(a).dump() == to_json(b).dump());
  }
}

TEST_CASE("record kinds expose their records, others refuse") {
  ExperimentSpec census = census_spec();
  CHECK_NOTHROW(run_trials(census));

  ExperimentSpec lln;
  lln.kind = ExperimentKind::lln;
  lln.graph_spec = "zpath:50";
  lln.trials = 5;
  lln.max_steps = 500;
  CHECK_THROWS_AS(run_trials(lln), std::invalid_argument);
  CHECK_THROWS_AS(summarize_records(lln, {}), std::invalid_argument);
}

TEST_CASE("velocity statistics concentrate near the speed limit") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::lln;
  spec.graph_spec = "zpath:50";
  spec.trials = 200;
  spec.max_steps = 20000;
  spec.seed = 3;
  SummaryStats stats = run_experiment(spec);
  const auto& lln = std::get<LlnStats>(stats.data);
  CHECK(lln.trials == 200);
  CHECK(lln.steps == 20000);
  CHECK(lln.mean_abs_velocity == doctest::Approx(0.46211715726).epsilon(0.05));
  CHECK(lln.se_abs_velocity > 0.0);
  CHECK(lln.se_abs_velocity < 0.01);
  CHECK(lln.positive_fraction >= 0.3);
  CHECK(lln.positive_fraction <= 0.7);
  CHECK(std::abs(lln.mean_velocity) <= lln.mean_abs_velocity);
}

TEST_CASE("turn frequencies sit above the product bound") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::turn_bound;
  spec.graph_spec = "cycle:3";
  spec.trials = 4000;
  spec.max_turns = 4;
  spec.seed = 8;
  SummaryStats stats = run_experiment(spec);
  const auto& tb = std::get<TurnBoundStats>(stats.data);
  CHECK(tb.ell == 3);
  CHECK(tb.degree == 2);
  REQUIRE(tb.frequency_at_least.size() == 4);
  REQUIRE(tb.bound_at_least.size() == 4);
  long hist_total = 0;
  for (long h : tb.turns_histogram) hist_total += h;
  CHECK(hist_total == spec.trials);
  CHECK(tb.bound_at_least[0] == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(tb.frequency_at_least[k] >=
          tb.bound_at_least[k] - 3.0 * tb.standard_errors[k]);
    if (k > 0) {
      CHECK(tb.frequency_at_least[k] <= tb.frequency_at_least[k - 1]);
      CHECK(tb.bound_at_least[k] < tb.bound_at_least[k - 1]);
    }
  }
}

TEST_CASE("escape frequencies decay with the radius") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::escape_decay;
  spec.graph_spec = "zdball:2,10";
  spec.trials = 150;
  spec.max_steps = 100000;
  spec.seed = 4;
  spec.radii = {2, 4, 6, 8};
  std::vector<TrialRecord> records = run_trials(spec);
  SummaryStats stats = summarize_records(spec, records);
  const auto& esc = std::get<EscapeDecayStats>(stats.data);
  REQUIRE(esc.radii == spec.radii);
  for (std::size_t i = 0; i < esc.radii.size(); ++i) {
    long count = 0;
    for (const TrialRecord& r : records)
      if (r.metrics.at("max_l1_norm") >= esc.radii[i]) ++count;
    CHECK(esc.escape_counts[i] == count);
    CHECK(esc.escape_frequencies[i] ==
          doctest::Approx(static_cast<double>(count) / spec.trials)
              .epsilon(1e-15));
    if (i > 0) CHECK(esc.escape_counts[i] <= esc.escape_counts[i - 1]);
  }
  CHECK(esc.log_slope < 0.0);
  CHECK(esc.summary.trials == spec.trials);
}

TEST_CASE("coupling experiment keeps every prefix aligned") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::coupling;
  spec.graph_spec = "zdball:2,8";
  spec.trials = 20;
  spec.max_steps = 30000;
  spec.seed = 6;
  spec.radii = {3, 5};
  SummaryStats stats = run_experiment(spec);
  const auto& cp = std::get<CouplingStats>(stats.data);
  CHECK(cp.radii == spec.radii);
  CHECK(cp.trials == 20);
  CHECK(cp.all_prefixes_match);
  for (std::size_t i = 0; i < cp.radii.size(); ++i) {
    CHECK(cp.sigma_reached[i] <= cp.trials);
    if (cp.sigma_reached[i] > 0)
      CHECK(cp.mean_sigma[i] >= cp.radii[i]);
  }
}

TEST_CASE("closed-form equivalence experiment passes exactly") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::oned_equiv;
  spec.graph_spec = "zpath:50";
  spec.trials = 30;
  spec.max_steps = 500;
  spec.seed = 7;
  SummaryStats stats = run_experiment(spec);
  const auto& eq = std::get<OneDimEquivStats>(stats.data);
  CHECK(eq.trajectories == 30);
  CHECK(eq.steps_checked > 0);
  CHECK(eq.fields_match);
  CHECK(eq.max_transition_diff <= 1e-12);
  CHECK(eq.pass);
}

TEST_CASE("trial rows carry certificates only when trapped") {
  ExperimentSpec spec = census_spec();
  spec.trials = 12;
  std::vector<TrialRecord> records = run_trials(spec);
  std::ostringstream out;
  write_trial_csv(out, records, spec.seed);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "trial,seed,stop_reason,steps,circuit_len,trap_time,gap_M,"
        "residual_bound");
  long rows = 0;
  while (std::getline(in, line)) {
    std::size_t trial = rows;
    REQUIRE(trial < records.size());
    bool trapped = records[trial].stop == StopReason::trapped;
    if (trapped) {
      CHECK(line.find(",,,") == std::string::npos);
    } else {
      CHECK(line.substr(line.size() - 4) == ",,,,");
    }
    ++rows;
  }
  CHECK(rows == static_cast<long>(records.size()));
}
