#include "derw/renewal.hpp"

#include <stdexcept>

#include "derw/trapping.hpp"

namespace derw {

Circuit first_circuit(const Graph& g) {
  for (int len = 3; len <= g.vertex_count(); ++len) {
    auto found = enumerate_circuits(g, len);
    if (!found.empty()) return found.front();
  }
  throw std::invalid_argument("graph has no circuit");
}

Circuit orient_by_gap(const CrossingField& field, const Circuit& c) {
  Circuit canon = c.canonical();
  Circuit rev = canon.reversed();
  return field.circuit_gap(rev) > field.circuit_gap(canon) ? rev : canon;
}

RenewalTrial renewal_trial(const Graph& g, double beta, RngStream& rng,
                           long max_renewals, long max_steps, double epsilon) {
  RenewalTrial out;
  if (max_renewals <= 0) return out;

  Circuit c_star = first_circuit(g);
  WalkerState s(g, g.origin(), beta);
  TrapObserver obs(g, beta, epsilon);
  obs.on_start(s);

  auto build = [&]() {
    ++out.plans_started;
    return build_auxiliary_plan(s, orient_by_gap(s.field, c_star));
  };
  AuxiliaryPlan plan = build();
  long age = 0;  // matched steps since the plan was built

  for (long t = 1; t <= max_steps; ++t) {
    Vertex v = apply_step(s, rng);
    if (v == plan.at(age + 1)) {
      ++age;
    } else {
      if (out.plans_started >= max_renewals) {
        out.steps = s.step_count;
        out.stop = StopReason::custom;
        return out;
      }
      plan = build();
      age = 0;
    }
    if (auto r = obs.after_step(s)) {
      out.steps = s.step_count;
      out.stop = *r;
      if (*r == StopReason::trapped) {
        out.success = true;
        out.successful_plan = out.plans_started - 1;
      }
      return out;
    }
  }
  out.steps = s.step_count;
  return out;
}

RenewalReport renewal_experiment(const Graph& g, double beta,
                                 std::uint64_t seed, long trials,
                                 long max_renewals, long max_steps,
                                 double epsilon) {
  if (trials < 1)
    throw std::invalid_argument("renewal_experiment: trials must be >= 1");
  RenewalReport rep;
  if (max_renewals <= 0) return rep;
  rep.trials = trials;
  for (long t = 0; t < trials; ++t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t));
    RenewalTrial tr =
        renewal_trial(g, beta, rng, max_renewals, max_steps, epsilon);
    rep.plans_started += tr.plans_started;
    if (tr.success) {
      ++rep.successes;
      auto k = static_cast<std::size_t>(tr.successful_plan);
      if (rep.renewal_histogram.size() <= k) rep.renewal_histogram.resize(k + 1);
      ++rep.renewal_histogram[k];
    } else if (tr.stop == StopReason::custom) {
      ++rep.censored_renewals;
    } else {
      ++rep.censored_steps;
    }
  }
  if (rep.plans_started > 0)
    rep.per_renewal_success =
        static_cast<double>(rep.successes) / static_cast<double>(rep.plans_started);
  return rep;
}

}  // namespace derw
