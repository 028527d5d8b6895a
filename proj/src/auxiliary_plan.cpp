#include "derw/auxiliary_plan.hpp"

#include <algorithm>
#include <stdexcept>

namespace derw {

const char* to_string(PlanCase c) {
  switch (c) {
    case PlanCase::heavy_inside: return "heavy_inside";
    case PlanCase::heavy_outside: return "heavy_outside";
    case PlanCase::fresh_to_cstar: return "fresh_to_cstar";
    case PlanCase::fresh_on_cstar: return "fresh_on_cstar";
  }
  return "unknown";
}

namespace {

// Extends `path` (already walked into `scratch`) by smallest-id good edges
// until some vertex of the good-edge portion (indices >= entry) repeats, so
// the closed cycle consists of good edges only. Returns the cycle start.
std::size_t good_edge_walk(const Graph& g, CrossingField& scratch,
                           std::vector<Vertex>& path, std::size_t entry,
                           int& ties) {
  std::vector<long> first_visit(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = entry; i < path.size(); ++i)
    first_visit[static_cast<std::size_t>(path[i])] = static_cast<long>(i);
  for (int guard = 0; guard <= g.vertex_count() + 1; ++guard) {
    Vertex cur = path.back();
    std::vector<Vertex> goods = scratch.good_edges(cur);
    if (goods.empty())
      throw std::runtime_error("auxiliary plan: isolated vertex");
    if (goods.size() > 1) ++ties;
    Vertex next = goods.front();
    scratch.record_step(cur, next);
    long seen = first_visit[static_cast<std::size_t>(next)];
    if (seen >= 0) {
      path.push_back(next);
      return static_cast<std::size_t>(seen);
    }
    first_visit[static_cast<std::size_t>(next)] = static_cast<long>(path.size());
    path.push_back(next);
  }
  throw std::logic_error("auxiliary plan: good-edge walk failed to close");
}

}  // namespace

AuxiliaryPlan build_auxiliary_plan(const WalkerState& s, const Circuit& c_star) {
  const Graph& g = *s.graph;
  if (!is_valid_circuit(g, c_star))
    throw std::invalid_argument("auxiliary plan: reference circuit invalid");
  std::vector<Vertex> heavy = s.field.heavy_set();
  AuxiliaryPlan plan;
  plan.ties_encountered = 0;

  if (heavy.empty()) {
    const auto& on = c_star.vertices;
    bool on_cstar = std::find(on.begin(), on.end(), s.position) != on.end();
    if (on_cstar) {
      plan.case_tag = PlanCase::fresh_on_cstar;
      plan.cycle = c_star.rotated_to(s.position);
    } else {
      plan.case_tag = PlanCase::fresh_to_cstar;
      std::vector<Vertex> path = g.shortest_path(s.position, on);
      plan.cycle = c_star.rotated_to(path.back());
      path.pop_back();
      plan.prefix = std::move(path);
    }
    plan.reference_circuit = c_star;
    plan.heavy_entry_index = -1;
    return plan;
  }

  bool inside = std::binary_search(heavy.begin(), heavy.end(), s.position);
  CrossingField scratch = s.field;
  std::vector<Vertex> path;
  if (inside) {
    plan.case_tag = PlanCase::heavy_inside;
    plan.heavy_entry_index = 0;
    path.push_back(s.position);
  } else {
    plan.case_tag = PlanCase::heavy_outside;
    path = g.shortest_path(s.position, heavy);
    plan.heavy_entry_index = static_cast<int>(path.size()) - 1;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      scratch.record_step(path[i], path[i + 1]);
  }
  std::size_t cycle_start =
      good_edge_walk(g, scratch, path,
                     static_cast<std::size_t>(plan.heavy_entry_index),
                     plan.ties_encountered);
  if (path.size() - cycle_start - 1 < 3)
    throw std::runtime_error("auxiliary plan: good-edge walk closed a loop "
                             "shorter than 3; field not reachable by a walk");
  plan.cycle.vertices.assign(path.begin() + static_cast<long>(cycle_start),
                             path.end() - 1);
  plan.prefix.assign(path.begin(), path.begin() + static_cast<long>(cycle_start));
  plan.reference_circuit = plan.cycle;
  return plan;
}

bool verify_non_backtracking(const AuxiliaryPlan& plan, const WalkerState& s) {
  if (plan.case_tag == PlanCase::fresh_on_cstar ||
      plan.case_tag == PlanCase::fresh_to_cstar)
    return true;
  CrossingField scratch = s.field;
  long total = static_cast<long>(plan.prefix.size()) + 2L * plan.cycle.length();
  long entry = plan.heavy_entry_index;
  for (long i = 0; i + 1 <= total; ++i) {
    Vertex from = plan.at(i);
    Vertex to = plan.at(i + 1);
    if (i >= entry) {
      if (i > entry && to == plan.at(i - 1)) return false;  // backtrack
      std::vector<Vertex> goods = scratch.good_edges(from);
      if (std::find(goods.begin(), goods.end(), to) == goods.end()) return false;
      if (scratch.crossing(from, to) < 1) return false;
    }
    scratch.record_step(from, to);
  }
  return true;
}

}  // namespace derw
