#include "derw/crossing_field.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace derw {

CrossingField::CrossingField(const Graph& g)
    : g_(&g), c_(static_cast<std::size_t>(g.edge_count()), 0) {}

long CrossingField::edge_or_throw(Vertex u, Vertex v) const {
  long e = g_->edge_index(u, v);
  if (e < 0)
    throw std::invalid_argument("(" + std::to_string(u) + ", " + std::to_string(v) +
                                ") is not an edge");
  return e;
}

int CrossingField::crossing(Vertex u, Vertex v) const {
  long e = edge_or_throw(u, v);
  int stored = c_[static_cast<std::size_t>(e)];
  return u < v ? stored : -stored;
}

void CrossingField::record_step(Vertex from, Vertex to) {
  long e = edge_or_throw(from, to);
  c_[static_cast<std::size_t>(e)] += from < to ? 1 : -1;
}

void CrossingField::set_crossing(Vertex u, Vertex v, int value) {
  long e = edge_or_throw(u, v);
  c_[static_cast<std::size_t>(e)] = u < v ? value : -value;
}

long long CrossingField::flow(Vertex u) const {
  long long s = 0;
  for (Vertex v : g_->neighbors(u)) s += crossing(u, v);
  return s;
}

std::vector<Vertex> CrossingField::good_edges(Vertex u) const {
  auto nb = g_->neighbors(u);
  if (nb.empty()) return {};
  int best = std::numeric_limits<int>::min();
  for (Vertex v : nb) best = std::max(best, crossing(u, v));
  std::vector<Vertex> out;
  for (Vertex v : nb)
    if (crossing(u, v) == best) out.push_back(v);
  return out;  // ascending: adjacency is sorted
}

std::vector<Vertex> CrossingField::heavy_set() const {
  std::vector<char> mark(static_cast<std::size_t>(g_->vertex_count()), 0);
  for (auto [u, v] : g_->edges()) {
    long e = g_->edge_index(u, v);
    if (std::abs(c_[static_cast<std::size_t>(e)]) >= 2) {
      mark[static_cast<std::size_t>(u)] = 1;
      mark[static_cast<std::size_t>(v)] = 1;
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g_->vertex_count(); ++v)
    if (mark[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

int CrossingField::circuit_gap(const Circuit& circuit) const {
  if (!is_valid_circuit(*g_, circuit))
    throw std::invalid_argument("circuit_gap: not a circuit of this graph");
  const auto& vs = circuit.vertices;
  long best = std::numeric_limits<long>::max();
  for (std::size_t j = 0; j < vs.size(); ++j) {
    Vertex u = vs[j];
    Vertex next = vs[(j + 1) % vs.size()];
    int on = crossing(u, next);
    for (Vertex y : g_->neighbors(u)) {
      if (y == next) continue;
      best = std::min(best, static_cast<long>(on) - crossing(u, y));
    }
  }
  // u_{j-1} is always an eligible alternative, so some term exists.
  if (best == std::numeric_limits<long>::max())
    throw std::logic_error("circuit_gap: empty alternative set");
  return static_cast<int>(best);
}

std::vector<std::tuple<Vertex, Vertex, int>> CrossingField::nonzero_entries() const {
  std::vector<std::tuple<Vertex, Vertex, int>> out;
  for (auto [u, v] : g_->edges()) {
    int value = c_[static_cast<std::size_t>(g_->edge_index(u, v))];
    if (value != 0) out.emplace_back(u, v, value);
  }
  return out;
}

int CrossingField::max_abs_crossing() const {
  int best = 0;
  for (int value : c_) best = std::max(best, std::abs(value));
  return best;
}

}  // namespace derw
