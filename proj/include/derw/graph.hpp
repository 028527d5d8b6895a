#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace derw {

using Vertex = int;

// Error from the edge-list parser. line() is 1-based; 0 means the problem is
// a whole-file property (e.g. the input is disconnected).
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// A circuit: a closed path of at least three distinct, consecutively adjacent
// vertices. The vertex order is the orientation.
struct Circuit {
  std::vector<Vertex> vertices;

  int length() const { return static_cast<int>(vertices.size()); }
  Vertex at(long i) const {
    long n = static_cast<long>(vertices.size());
    return vertices[static_cast<std::size_t>(((i % n) + n) % n)];
  }
  Circuit reversed() const;
  // Rotation starting at v; v must be on the circuit.
  Circuit rotated_to(Vertex v) const;
  // Smallest vertex first, then the direction with the smaller second vertex.
  // Identifies the circuit up to rotation and reflection.
  Circuit canonical() const;

  bool operator==(const Circuit&) const = default;
};

// Undirected simple connected graph with sorted adjacency lists and dense
// vertex ids. Immutable after construction; safe to share across threads.
//
// Lattice generators (zd_ball, z_path) also carry the integer coordinates of
// each vertex, the generation radius and the inner boundary (vertices at l1
// norm exactly radius()).
class Graph {
public:
  static Graph cycle(int n);
  static Graph complete(int n);
  static Graph grid(int width, int height);
  static Graph torus(int width, int height);
  // l1 ball of radius r in dimension d; vertices ordered by (l1 norm, lex
  // coordinates), so the origin is vertex 0 and smaller balls are prefixes
  // of larger ones.
  static Graph zd_ball(int dim, int radius);
  // Path on coordinates -half_len..half_len; vertex id = coordinate + half_len.
  static Graph z_path(int half_len);
  // Triangle 0-1-2 with a path of leaf_len extra edges hanging off vertex 0.
  static Graph triangle_leaf(int leaf_len);

  // Edge-list text: one "u v" pair per line, '#' comments and blank lines
  // ignored, vertices re-indexed densely in first-appearance order.
  // Rejects self-loops, duplicate edges, malformed lines (with line numbers)
  // and disconnected inputs.
  static Graph from_edge_list(std::istream& in, std::string name = "file");
  static Graph load_edge_list(const std::string& path);

  // "cycle:3", "complete:4", "grid:3x3", "torus:3x3", "zdball:2,9",
  // "zpath:100", "triangleleaf:50", "file:edges.txt".
  static Graph from_spec(const std::string& spec);

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  long edge_count() const { return edge_count_; }
  std::span<const Vertex> neighbors(Vertex u) const;
  int degree(Vertex u) const { return static_cast<int>(neighbors(u).size()); }
  int max_degree() const { return max_degree_; }
  bool has_edge(Vertex u, Vertex v) const { return edge_index(u, v) >= 0; }
  // Dense id of the undirected edge {u, v}, or -1 if not an edge.
  long edge_index(Vertex u, Vertex v) const;
  // All edges as (u, v) pairs with u < v, ordered by edge index.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  const std::string& name() const { return name_; }
  // Canonical start vertex: the lattice origin where there is one, else 0.
  Vertex origin() const { return origin_; }

  bool has_coordinates() const { return !coords_.empty(); }
  std::span<const int> coordinate(Vertex v) const;
  int l1_norm(Vertex v) const;
  int radius() const { return radius_; }
  const std::vector<Vertex>& inner_boundary() const { return inner_boundary_; }

  // Breadth-first shortest path from v to the nearest target, ties broken by
  // smallest vertex id at each layer. Returns [v] when v is itself a target.
  std::vector<Vertex> shortest_path(Vertex v, std::span<const Vertex> targets) const;

  void write_edge_list(std::ostream& out) const;

  void check_vertex(Vertex v) const;

private:
  Graph() = default;
  static Graph build(std::vector<std::pair<Vertex, Vertex>> edge_pairs,
                     int vertex_count, std::string name);
  void finalize_edges();

  std::vector<std::vector<Vertex>> adj_;
  std::vector<long> edge_offset_;  // prefix of upper-neighbor counts, by vertex
  long edge_count_ = 0;
  int max_degree_ = 0;
  std::string name_;
  Vertex origin_ = 0;

  std::vector<std::vector<int>> coords_;
  std::vector<Vertex> inner_boundary_;
  int radius_ = -1;
};

// Validity of a circuit in g: length >= 3, distinct vertices, consecutive
// adjacency including the wrap-around edge.
bool is_valid_circuit(const Graph& g, const Circuit& c);

}  // namespace derw
