#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "derw/auxiliary_plan.hpp"
#include "derw/coupling.hpp"
#include "derw/one_dim.hpp"
#include "derw/renewal.hpp"
#include "derw/trapping.hpp"

using namespace derw;

namespace {

// Walk history laid down with record_step, so the field obeys the flow
// constraints of a genuine walk.
void replay(WalkerState& s, std::initializer_list<Vertex> steps) {
  for (Vertex v : steps) {
    s.field.record_step(s.position, v);
    s.position = v;
    ++s.step_count;
  }
}

}  // namespace

TEST_CASE("fresh plan on the reference circuit spins it in place") {
  Graph g = Graph::cycle(3);
  Circuit c_star{{0, 1, 2}};

  WalkerState s(g, 0, 1.0);
  AuxiliaryPlan plan = build_auxiliary_plan(s, c_star);
  CHECK(plan.case_tag == PlanCase::fresh_on_cstar);
  CHECK(plan.prefix.empty());
  CHECK(plan.cycle.vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(plan.reference_circuit.vertices == c_star.vertices);
  CHECK(plan.heavy_entry_index == -1);
  CHECK(plan.at(0) == 0);
  CHECK(plan.at(4) == 1);
  CHECK(verify_non_backtracking(plan, s));  // fresh cases are vacuous

  WalkerState t(g, 1, 1.0);
  AuxiliaryPlan rotated = build_auxiliary_plan(t, c_star);
  CHECK(rotated.cycle.vertices == std::vector<Vertex>{1, 2, 0});
  CHECK(rotated.at(0) == 1);
}

TEST_CASE("fresh plan off the circuit walks to it first") {
  Graph g = Graph::triangle_leaf(3);  // chain 0-3-4-5 hangs off the triangle
  Circuit c_star{{0, 1, 2}};
  WalkerState s(g, 5, 1.0);
  AuxiliaryPlan plan = build_auxiliary_plan(s, c_star);
  CHECK(plan.case_tag == PlanCase::fresh_to_cstar);
  CHECK(plan.prefix == std::vector<Vertex>{5, 4, 3});
  CHECK(plan.cycle.vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(plan.heavy_entry_index == -1);
  CHECK(plan.at(0) == 5);
  CHECK(plan.at(3) == 0);
  CHECK(plan.at(6) == 0);
  CHECK(verify_non_backtracking(plan, s));
}

TEST_CASE("heavy plan from inside follows good edges around the loop") {
  Graph g = Graph::cycle(3);
  WalkerState s(g, 0, 1.0);
  replay(s, {1, 2, 0, 1, 2, 0});  // two forward laps
  REQUIRE(s.field.heavy_set() == std::vector<Vertex>{0, 1, 2});

  AuxiliaryPlan plan = build_auxiliary_plan(s, Circuit{{0, 1, 2}});
  CHECK(plan.case_tag == PlanCase::heavy_inside);
  CHECK(plan.prefix.empty());
  CHECK(plan.cycle.vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(plan.reference_circuit.vertices == plan.cycle.vertices);
  CHECK(plan.heavy_entry_index == 0);
  CHECK(plan.ties_encountered == 0);
  CHECK(verify_non_backtracking(plan, s));
}

TEST_CASE("heavy plan from outside reaches the heavy set by shortest path") {
  Graph g = Graph::triangle_leaf(2);
  WalkerState s(g, 0, 1.0);
  replay(s, {1, 2, 0, 1, 2, 0, 3});  // two laps, then step onto the chain
  REQUIRE(s.position == 3);
  REQUIRE(s.field.heavy_set() == std::vector<Vertex>{0, 1, 2});

  AuxiliaryPlan plan = build_auxiliary_plan(s, Circuit{{0, 1, 2}});
  CHECK(plan.case_tag == PlanCase::heavy_outside);
  CHECK(plan.prefix == std::vector<Vertex>{3});
  CHECK(plan.cycle.vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(plan.heavy_entry_index == 1);
  CHECK(verify_non_backtracking(plan, s));
}

TEST_CASE("verification rejects backtracking and off-good-edge plans") {
  Graph g = Graph::cycle(3);
  WalkerState s(g, 0, 1.0);
  replay(s, {1, 2, 0, 1, 2, 0});

  AuxiliaryPlan backtrack;
  backtrack.case_tag = PlanCase::heavy_inside;
  backtrack.cycle = Circuit{{0, 1, 0}};
  backtrack.heavy_entry_index = 0;
  CHECK(!verify_non_backtracking(backtrack, s));

  AuxiliaryPlan against;  // reverse orientation walks edges of crossing -2
  against.case_tag = PlanCase::heavy_inside;
  against.cycle = Circuit{{0, 2, 1}};
  against.heavy_entry_index = 0;
  CHECK(!verify_non_backtracking(against, s));
}

TEST_CASE("plans built from hand-edited fields can fail verification") {
  // set_crossing can produce fields no walk generates; the crossing >= 1
  // requirement then has no reason to hold along the planned cycle
  Graph g = Graph::cycle(3);
  WalkerState s(g, 0, 1.0);
  s.field.set_crossing(0, 1, 2);
  AuxiliaryPlan plan = build_auxiliary_plan(s, Circuit{{0, 1, 2}});
  CHECK(plan.case_tag == PlanCase::heavy_inside);
  CHECK(plan.cycle.vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(!verify_non_backtracking(plan, s));
}

TEST_CASE("plan construction rejects an invalid reference circuit") {
  Graph g = Graph::cycle(5);
  WalkerState s(g, 0, 1.0);
  CHECK_THROWS_AS(build_auxiliary_plan(s, Circuit{{0, 1, 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_auxiliary_plan(s, Circuit{{0, 1}}),
                  std::invalid_argument);
}

TEST_CASE("plans harvested from real walks are sound") {
  long heavy_states = 0;
  for (const char* spec : {"complete:4", "torus:3x3"}) {
    Graph g = Graph::from_spec(spec);
    Circuit c_star = first_circuit(g);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      WalkerState s(g, g.origin(), 1.0);
      RngStream rng(seed, 3);
      for (int n = 0; n < 400; ++n) {
        apply_step(s, rng);
        AuxiliaryPlan plan = build_auxiliary_plan(s, c_star);
        CHECK(plan.at(0) == s.position);
        REQUIRE(is_valid_circuit(g, plan.cycle));
        CHECK(static_cast<long>(plan.prefix.size()) + plan.cycle.length() <=
              g.vertex_count() + 1);
        // consecutive plan vertices are adjacent well past one period
        long horizon =
            static_cast<long>(plan.prefix.size()) + 2L * plan.cycle.length();
        for (long i = 0; i + 1 <= horizon; ++i)
          REQUIRE(g.has_edge(plan.at(i), plan.at(i + 1)));
        bool heavy = !s.field.heavy_set().empty();
        if (heavy) {
          ++heavy_states;
          CHECK((plan.case_tag == PlanCase::heavy_inside ||
                 plan.case_tag == PlanCase::heavy_outside));
          CHECK(verify_non_backtracking(plan, s));
        } else {
          CHECK((plan.case_tag == PlanCase::fresh_on_cstar ||
                 plan.case_tag == PlanCase::fresh_to_cstar));
        }
      }
    }
  }
  CHECK(heavy_states > 10000);
}

TEST_CASE("smallest circuit class comes first") {
  CHECK(first_circuit(Graph::cycle(3)).vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(first_circuit(Graph::complete(4)).vertices ==
        std::vector<Vertex>{0, 1, 2});
  CHECK(first_circuit(Graph::cycle(5)).vertices ==
        std::vector<Vertex>{0, 1, 2, 3, 4});
  CHECK(first_circuit(Graph::torus(3, 3)).length() == 3);
  CHECK(first_circuit(Graph::zd_ball(2, 2)).length() == 4);
  CHECK_THROWS_AS(first_circuit(Graph::z_path(5)), std::invalid_argument);
}

TEST_CASE("orientation follows the larger circuit gap") {
  Graph g = Graph::cycle(3);
  Circuit canon{{0, 1, 2}};

  CrossingField fresh(g);
  CHECK(orient_by_gap(fresh, canon).vertices == std::vector<Vertex>{0, 1, 2});

  CrossingField forward(g);
  forward.record_step(0, 1);
  forward.record_step(1, 2);
  forward.record_step(2, 0);
  CHECK(orient_by_gap(forward, canon).vertices == std::vector<Vertex>{0, 1, 2});

  CrossingField backward(g);
  backward.record_step(0, 2);
  backward.record_step(2, 1);
  backward.record_step(1, 0);
  auto flipped = orient_by_gap(backward, canon);
  CHECK(flipped.vertices == std::vector<Vertex>{0, 2, 1});
  CHECK(backward.circuit_gap(flipped) == 2);
}

TEST_CASE("line transition law") {
  OneDimModel m{1.0};
  auto [r0, l0] = one_dim_transition(m, 0);
  CHECK(r0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(l0 == doctest::Approx(0.5).epsilon(1e-15));

  double out = 0.73105857863;
  auto [r3, l3] = one_dim_transition(m, 3);
  CHECK(r3 == doctest::Approx(out).epsilon(1e-10));
  CHECK(r3 + l3 == doctest::Approx(1.0).epsilon(1e-15));
  auto [rm, lm] = one_dim_transition(m, -2);
  CHECK(lm == doctest::Approx(out).epsilon(1e-10));

  OneDimModel flat{0.0};
  auto [rf, lf] = one_dim_transition(flat, 7);
  CHECK(rf == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lf == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("speed limit equals tanh of half beta") {
  CHECK(lln_limit(1.0) == doctest::Approx(0.46211715726).epsilon(1e-10));
  RngStream rng(13);
  for (int i = 0; i < 20; ++i) {
    double beta = 0.1 + rng.next_double() * 4.9;
    CHECK(lln_limit(beta) ==
          doctest::Approx(std::tanh(beta / 2.0)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(lln_limit(0.0), std::invalid_argument);
}

TEST_CASE("closed-form walk matches the graph engine on a shared stream") {
  Graph g = Graph::z_path(300);
  OneDimModel m{1.0};
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    for (long steps : {1L, 10L, 137L}) {
      RngStream fast(seed, 5);
      long long x = one_dim_walk(m, steps, fast);

      RngStream slow(seed, 5);
      WalkerState s(g, g.origin(), 1.0);
      for (long n = 0; n < steps; ++n) apply_step(s, slow);
      CHECK(static_cast<long long>(s.position) -
                static_cast<long long>(g.origin()) ==
            x);
    }
  }
}

TEST_CASE("predicted field on the line marks the straight run from origin") {
  Graph g = Graph::z_path(10);
  Vertex o = g.origin();

  CrossingField right = one_dim_expected_field(
      g, std::vector<Vertex>{o, o + 1, o + 2, o + 1});
  CrossingField want_right(g);
  want_right.set_crossing(o, o + 1, 1);
  CHECK(right == want_right);

  CrossingField left = one_dim_expected_field(
      g, std::vector<Vertex>{o, o + 1, o, o - 1, o - 2});
  CrossingField want_left(g);
  want_left.set_crossing(o, o - 1, 1);
  want_left.set_crossing(o - 1, o - 2, 1);
  CHECK(left == want_left);

  CrossingField home = one_dim_expected_field(g, std::vector<Vertex>{o});
  CHECK(home == CrossingField(g));

  CHECK_THROWS_AS(
      one_dim_expected_field(g, std::vector<Vertex>{o + 1, o + 2}),
      std::invalid_argument);
  CHECK_THROWS_AS(one_dim_expected_field(g, std::vector<Vertex>{o, o + 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      one_dim_expected_field(Graph::cycle(3), std::vector<Vertex>{0}),
      std::invalid_argument);
}

TEST_CASE("engine fields on the line match the prediction step by step") {
  Graph g = Graph::z_path(40);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    WalkerState s(g, g.origin(), 1.0);
    RngStream rng(seed, 9);
    std::vector<Vertex> traj{s.position};
    for (int n = 0; n < 25; ++n) {
      apply_step(s, rng);
      traj.push_back(s.position);
      CHECK(one_dim_expected_field(g, traj) == s.field);
    }
  }
}

TEST_CASE("coupled walkers share the stream until their exit time") {
  Graph ball = Graph::zd_ball(2, 6);
  std::vector<int> radii{2, 4};
  CouplingReport report =
      coupled_run(ball, radii, 1.0, RngStream(3), 20000, 1e-6);
  REQUIRE(report.walkers.size() == 2);

  // replay the full walk: same stream, one quantile per step
  WalkerState s(ball, ball.origin(), 1.0);
  RngStream rng(3);
  std::vector<int> norms{ball.l1_norm(s.position)};
  for (long n = 0; n < report.full_walk.steps; ++n) {
    apply_step(s, rng);
    norms.push_back(ball.l1_norm(s.position));
  }
  CHECK(s.position == report.full_walk.final_position);

  for (std::size_t i = 0; i < radii.size(); ++i) {
    const CoupledWalkerOutcome& w = report.walkers[i];
    CHECK(w.radius == radii[i]);
    CHECK(w.prefix_ok);
    long first_hit = -1;
    for (std::size_t t = 0; t < norms.size(); ++t)
      if (norms[t] == radii[i]) {
        first_hit = static_cast<long>(t);
        break;
      }
    if (w.sigma >= 0) {
      CHECK(w.sigma == first_hit);
      CHECK(w.sigma >= radii[i]);  // needs at least r steps to reach norm r
    } else {
      // the full walk never reached this norm while both still ran
      CHECK((first_hit == -1 || first_hit > w.steps));
    }
    if (w.stop == StopReason::trapped) {
      REQUIRE(w.certificate.has_value());
      CHECK(w.certificate->residual <= 1e-6);
    }
  }
}

TEST_CASE("coupling with no radii reduces to a plain observed walk") {
  Graph ball = Graph::zd_ball(2, 5);
  CouplingReport report = coupled_run(ball, {}, 1.0, RngStream(11), 50000, 1e-6);
  CHECK(report.walkers.empty());

  WalkerState s(ball, ball.origin(), 1.0);
  RngStream rng(11);
  TrapObserver trap(ball, 1.0, 1e-6);
  Observer* obs[] = {&trap};
  TrialRecord rec = run_walk(s, rng, 50000, obs);
  CHECK(report.full_walk.steps == rec.steps);
  CHECK(report.full_walk.final_position == rec.final_position);
  CHECK(report.full_walk.stop == rec.stop);
  CHECK(report.full_walk.certificate.has_value() ==
        rec.certificate.has_value());
  if (rec.certificate)
    CHECK(report.full_walk.certificate->circuit.vertices ==
          rec.certificate->circuit.vertices);
}

TEST_CASE("coupling validates its inputs") {
  Graph ball = Graph::zd_ball(2, 4);
  std::vector<int> zero{0};
  CHECK_THROWS_AS(coupled_run(ball, zero, 1.0, RngStream(1), 100, 1e-6),
                  std::invalid_argument);
  std::vector<int> full{4};
  CHECK_THROWS_AS(coupled_run(ball, full, 1.0, RngStream(1), 100, 1e-6),
                  std::invalid_argument);
  std::vector<int> ok{2};
  CHECK_THROWS_AS(coupled_run(Graph::cycle(3), ok, 1.0, RngStream(1), 100, 1e-6),
                  std::invalid_argument);
}

TEST_CASE("renewal trials are deterministic and account for their plans") {
  Graph g = Graph::cycle(3);
  RngStream a(21), b(21);
  RenewalTrial ta = renewal_trial(g, 1.0, a, 1000, 100000, 1e-6);
  RenewalTrial tb = renewal_trial(g, 1.0, b, 1000, 100000, 1e-6);
  CHECK(ta.plans_started == tb.plans_started);
  CHECK(ta.success == tb.success);
  CHECK(ta.successful_plan == tb.successful_plan);
  CHECK(ta.steps == tb.steps);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed, 1);
    RenewalTrial t = renewal_trial(g, 1.0, rng, 1000, 100000, 1e-6);
    CHECK(t.plans_started >= 1);
    if (t.success) {
      CHECK(t.stop == StopReason::trapped);
      CHECK(t.successful_plan >= 0);
      CHECK(t.successful_plan < t.plans_started);
    } else {
      CHECK(t.successful_plan == -1);
      CHECK((t.stop == StopReason::budget || t.stop == StopReason::custom));
    }
  }
}

TEST_CASE("renewal trial with no plan budget does nothing") {
  Graph g = Graph::cycle(3);
  RngStream rng(4);
  RenewalTrial t = renewal_trial(g, 1.0, rng, 0, 1000, 1e-6);
  CHECK(t.plans_started == 0);
  CHECK(!t.success);
  CHECK(t.steps == 0);
}

TEST_CASE("renewal experiment totals are consistent") {
  Graph g = Graph::cycle(3);
  RenewalReport rep = renewal_experiment(g, 1.0, 1, 200, 1000, 100000, 1e-6);
  CHECK(rep.trials == 200);
  CHECK(rep.successes + rep.censored_steps + rep.censored_renewals ==
        rep.trials);
  long hist_total = 0;
  for (long h : rep.renewal_histogram) hist_total += h;
  CHECK(hist_total == rep.successes);
  CHECK(rep.plans_started >= rep.trials);
  CHECK(rep.per_renewal_success ==
        doctest::Approx(static_cast<double>(rep.successes) /
                        static_cast<double>(rep.plans_started))
            .epsilon(1e-15));
  CHECK(rep.per_renewal_success > 0.25);

  RenewalReport again = renewal_experiment(g, 1.0, 1, 200, 1000, 100000, 1e-6);
  CHECK(again.successes == rep.successes);
  CHECK(again.plans_started == rep.plans_started);
  CHECK(again.renewal_histogram == rep.renewal_histogram);

  RenewalReport none = renewal_experiment(g, 1.0, 1, 5, 0, 1000, 1e-6);
  CHECK(none.trials == 0);  // empty report, nothing ran
  CHECK(none.plans_started == 0);
  CHECK(none.successes == 0);
  CHECK(none.per_renewal_success == 0.0);

  CHECK_THROWS_AS(renewal_experiment(g, 1.0, 1, 0, 10, 100, 1e-6),
                  std::invalid_argument);
}
