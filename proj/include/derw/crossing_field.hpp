#pragma once

#include <tuple>
#include <vector>

#include "derw/graph.hpp"

namespace derw {

// Antisymmetric crossing numbers on the edges of a graph: crossing(u, v) is
// the net number of directed traversals u -> v minus v -> u. One integer is
// stored per undirected edge with the sign convention of the (u < v)
// direction, so crossing(u, v) == -crossing(v, u) holds structurally.
class CrossingField {
public:
  explicit CrossingField(const Graph& g);

  const Graph& graph() const { return *g_; }

  // Net crossings from u to v; (u, v) must be an edge.
  int crossing(Vertex u, Vertex v) const;
  // Apply one traversal from -> to.
  void record_step(Vertex from, Vertex to);
  // Overwrite a single entry; for constructing arbitrary initial fields.
  void set_crossing(Vertex u, Vertex v, int value);

  // Sum of crossing(u, v) over the neighbors v of u. For any field produced
  // by a walk this is +1 at the walk's start vertex, -1 at its current
  // vertex and 0 elsewhere (all zero once the walk returns to its start).
  long long flow(Vertex u) const;

  // Neighbors v of u attaining max_w crossing(u, w), ascending by id.
  // Never empty for a vertex of positive degree.
  std::vector<Vertex> good_edges(Vertex u) const;

  // Vertices with an incident edge of |crossing| >= 2, ascending.
  std::vector<Vertex> heavy_set() const;

  // min over circuit positions j and neighbors y != u_{j+1} of
  // crossing(u_j, u_{j+1}) - crossing(u_j, y). The inner set always
  // contains u_{j-1}, so it is never empty on a valid circuit.
  int circuit_gap(const Circuit& c) const;

  // Nonzero entries as (u, v, crossing(u, v)) with u < v, ordered by edge.
  std::vector<std::tuple<Vertex, Vertex, int>> nonzero_entries() const;

  int max_abs_crossing() const;

  bool operator==(const CrossingField& other) const { return c_ == other.c_; }

private:
  long edge_or_throw(Vertex u, Vertex v) const;

  const Graph* g_;
  std::vector<int> c_;  // by undirected edge id, sign of the (min, max) direction
};

}  // namespace derw
