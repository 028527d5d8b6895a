#include "derw/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace derw {

namespace {

[[noreturn]] void bad_spec(const std::string& spec, const std::string& why) {
  throw std::invalid_argument("bad graph spec '" + spec + "': " + why);
}

long long parse_int(const std::string& s, const std::string& spec) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    bad_spec(spec, "expected an integer, got '" + s + "'");
  }
  if (pos != s.size()) bad_spec(spec, "expected an integer, got '" + s + "'");
  return v;
}

std::vector<long long> parse_params(const std::string& body, const std::string& spec) {
  std::vector<long long> out;
  std::string cur;
  for (char ch : body + ",") {
    if (ch == ',' || ch == 'x') {
      if (cur.empty()) bad_spec(spec, "empty parameter");
      out.push_back(parse_int(cur, spec));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  return out;
}

}  // namespace

Circuit Circuit::reversed() const {
  Circuit out = *this;
  std::reverse(out.vertices.begin() + 1, out.vertices.end());
  return out;
}

Circuit Circuit::rotated_to(Vertex v) const {
  auto it = std::find(vertices.begin(), vertices.end(), v);
  if (it == vertices.end())
    throw std::invalid_argument("rotated_to: vertex not on circuit");
  Circuit out;
  out.vertices.reserve(vertices.size());
  out.vertices.insert(out.vertices.end(), it, vertices.end());
  out.vertices.insert(out.vertices.end(), vertices.begin(), it);
  return out;
}

Circuit Circuit::canonical() const {
  if (vertices.size() < 3) throw std::invalid_argument("circuit shorter than 3");
  Vertex root = *std::min_element(vertices.begin(), vertices.end());
  Circuit rot = rotated_to(root);
  if (rot.vertices[1] > rot.vertices.back()) rot = rot.reversed();
  return rot;
}

bool is_valid_circuit(const Graph& g, const Circuit& c) {
  const auto& vs = c.vertices;
  if (vs.size() < 3) return false;
  std::vector<Vertex> sorted = vs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (Vertex v : vs)
    if (v < 0 || v >= g.vertex_count()) return false;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (!g.has_edge(vs[i], vs[(i + 1) % vs.size()])) return false;
  return true;
}

void Graph::check_vertex(Vertex v) const {
  if (v < 0 || v >= vertex_count())
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
}

std::span<const Vertex> Graph::neighbors(Vertex u) const {
  check_vertex(u);
  return adj_[static_cast<std::size_t>(u)];
}

long Graph::edge_index(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return -1;
  Vertex a = std::min(u, v), b = std::max(u, v);
  const auto& nb = adj_[static_cast<std::size_t>(a)];
  auto base = std::lower_bound(nb.begin(), nb.end(), a + 1);
  auto it = std::lower_bound(base, nb.end(), b);
  if (it == nb.end() || *it != b) return -1;
  return edge_offset_[static_cast<std::size_t>(a)] + (it - base);
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (Vertex u = 0; u < vertex_count(); ++u)
    for (Vertex v : adj_[static_cast<std::size_t>(u)])
      if (v > u) out.emplace_back(u, v);
  return out;
}

std::span<const int> Graph::coordinate(Vertex v) const {
  check_vertex(v);
  if (!has_coordinates())
    throw std::logic_error("graph '" + name_ + "' has no lattice coordinates");
  return coords_[static_cast<std::size_t>(v)];
}

int Graph::l1_norm(Vertex v) const {
  int s = 0;
  for (int c : coordinate(v)) s += std::abs(c);
  return s;
}

void Graph::finalize_edges() {
  edge_offset_.assign(adj_.size() + 1, 0);
  max_degree_ = 0;
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    auto& nb = adj_[u];
    std::sort(nb.begin(), nb.end());
    max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
    long uppers = std::count_if(nb.begin(), nb.end(),
                                [&](Vertex v) { return v > static_cast<Vertex>(u); });
    edge_offset_[u + 1] = edge_offset_[u] + uppers;
  }
  edge_count_ = edge_offset_[adj_.size()];
  edge_offset_.pop_back();
}

Graph Graph::build(std::vector<std::pair<Vertex, Vertex>> edge_pairs,
                   int vertex_count, std::string name) {
  if (vertex_count <= 0)
    throw std::invalid_argument("graph '" + name + "': no vertices");
  Graph g;
  g.name_ = std::move(name);
  g.adj_.resize(static_cast<std::size_t>(vertex_count));
  for (auto [u, v] : edge_pairs) {
    if (u == v) throw std::invalid_argument("graph '" + g.name_ + "': self-loop");
    g.adj_[static_cast<std::size_t>(u)].push_back(v);
    g.adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  g.finalize_edges();
  for (const auto& nb : g.adj_)
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw std::invalid_argument("graph '" + g.name_ + "': duplicate edge");
  // connectivity
  if (vertex_count > 1) {
    std::vector<char> seen(static_cast<std::size_t>(vertex_count), 0);
    std::deque<Vertex> queue{0};
    seen[0] = 1;
    long reached = 1;
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      for (Vertex v : g.adj_[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++reached;
          queue.push_back(v);
        }
    }
    if (reached != vertex_count)
      throw std::invalid_argument("graph '" + g.name_ + "': disconnected");
  }
  return g;
}

Graph Graph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: need at least 3 vertices");
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return build(std::move(e), n, "cycle:" + std::to_string(n));
}

Graph Graph::complete(int n) {
  if (n < 2) throw std::invalid_argument("complete: need at least 2 vertices");
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return build(std::move(e), n, "complete:" + std::to_string(n));
}

Graph Graph::grid(int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("grid: bad dimensions");
  if (static_cast<long long>(width) * height < 2)
    throw std::invalid_argument("grid: need at least 2 vertices");
  auto id = [&](int x, int y) { return y * width + x; };
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width) e.emplace_back(id(x, y), id(x + 1, y));
      if (y + 1 < height) e.emplace_back(id(x, y), id(x, y + 1));
    }
  return build(std::move(e), width * height,
               "grid:" + std::to_string(width) + "x" + std::to_string(height));
}

Graph Graph::torus(int width, int height) {
  // Wrap-around edges duplicate the interior ones below 3.
  if (width < 3 || height < 3)
    throw std::invalid_argument("torus: both dimensions must be at least 3");
  auto id = [&](int x, int y) { return y * width + x; };
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      e.emplace_back(id(x, y), id((x + 1) % width, y));
      e.emplace_back(id(x, y), id(x, (y + 1) % height));
    }
  return build(std::move(e), width * height,
               "torus:" + std::to_string(width) + "x" + std::to_string(height));
}

Graph Graph::zd_ball(int dim, int radius) {
  if (dim < 1) throw std::invalid_argument("zd_ball: dimension must be at least 1");
  if (radius < 0) throw std::invalid_argument("zd_ball: negative radius");
  std::vector<std::vector<int>> points;
  std::vector<int> p(static_cast<std::size_t>(dim), -radius);
  for (;;) {
    int norm = 0;
    for (int c : p) norm += std::abs(c);
    if (norm <= radius) points.push_back(p);
    int i = dim - 1;
    while (i >= 0 && p[static_cast<std::size_t>(i)] == radius) {
      p[static_cast<std::size_t>(i)] = -radius;
      --i;
    }
    if (i < 0) break;
    ++p[static_cast<std::size_t>(i)];
  }
  auto norm_of = [](const std::vector<int>& q) {
    int s = 0;
    for (int c : q) s += std::abs(c);
    return s;
  };
  std::sort(points.begin(), points.end(),
            [&](const std::vector<int>& a, const std::vector<int>& b) {
              int na = norm_of(a), nb = norm_of(b);
              if (na != nb) return na < nb;
              return a < b;
            });
  std::map<std::vector<int>, Vertex> index;
  for (std::size_t i = 0; i < points.size(); ++i)
    index.emplace(points[i], static_cast<Vertex>(i));
  std::vector<std::pair<Vertex, Vertex>> e;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<int> q = points[i];
    for (int axis = 0; axis < dim; ++axis) {
      for (int delta : {1, -2}) {  // +1, then -1 relative to the original
        q[static_cast<std::size_t>(axis)] += delta;
        auto it = index.find(q);
        if (it != index.end() && it->second > static_cast<Vertex>(i))
          e.emplace_back(static_cast<Vertex>(i), it->second);
      }
      ++q[static_cast<std::size_t>(axis)];  // restore
    }
  }
  Graph g = build(std::move(e), static_cast<int>(points.size()),
                  "zdball:" + std::to_string(dim) + "," + std::to_string(radius));
  g.coords_ = std::move(points);
  g.radius_ = radius;
  g.origin_ = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.l1_norm(v) == radius) g.inner_boundary_.push_back(v);
  return g;
}

Graph Graph::z_path(int half_len) {
  if (half_len < 1) throw std::invalid_argument("z_path: need half length >= 1");
  int n = 2 * half_len + 1;
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  Graph g = build(std::move(e), n, "zpath:" + std::to_string(half_len));
  g.coords_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.coords_[static_cast<std::size_t>(i)] = {i - half_len};
  g.radius_ = half_len;
  g.origin_ = half_len;
  g.inner_boundary_ = {0, n - 1};
  return g;
}

Graph Graph::triangle_leaf(int leaf_len) {
  if (leaf_len < 0) throw std::invalid_argument("triangle_leaf: negative length");
  std::vector<std::pair<Vertex, Vertex>> e{{0, 1}, {1, 2}, {0, 2}};
  for (int i = 0; i < leaf_len; ++i)
    e.emplace_back(i == 0 ? 0 : 2 + i, 3 + i);
  return build(std::move(e), 3 + leaf_len, "triangleleaf:" + std::to_string(leaf_len));
}

Graph Graph::from_edge_list(std::istream& in, std::string name) {
  std::unordered_map<long long, Vertex> ids;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::pair<Vertex, Vertex>> seen_sorted;
  std::string line;
  int line_no = 0;
  auto intern = [&](long long raw) {
    auto [it, fresh] = ids.emplace(raw, static_cast<Vertex>(ids.size()));
    (void)fresh;
    return it->second;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ls(body);
    long long a, b;
    if (!(ls >> a)) continue;  // blank or comment-only line
    if (!(ls >> b)) throw ParseError(line_no, "expected two vertex ids");
    long long extra;
    if (ls >> extra) throw ParseError(line_no, "trailing data after edge");
    if (a < 0 || b < 0) throw ParseError(line_no, "negative vertex id");
    if (a == b) throw ParseError(line_no, "self-loop");
    Vertex u = intern(a), v = intern(b);
    std::pair<Vertex, Vertex> key{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(seen_sorted.begin(), seen_sorted.end(), key);
    if (it != seen_sorted.end() && *it == key)
      throw ParseError(line_no, "duplicate edge");
    seen_sorted.insert(it, key);
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw ParseError(0, "no edges in input");
  try {
    return build(std::move(edges), static_cast<int>(ids.size()), std::move(name));
  } catch (const std::invalid_argument& err) {
    throw ParseError(0, err.what());
  }
}

Graph Graph::load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return from_edge_list(in, path);
}

Graph Graph::from_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= spec.size())
    bad_spec(spec, "expected name:params");
  std::string kind = spec.substr(0, colon);
  std::string body = spec.substr(colon + 1);
  if (kind == "file") return load_edge_list(body);
  auto params = parse_params(body, spec);
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      bad_spec(spec, "expected " + std::to_string(n) + " parameter(s)");
  };
  auto as_int = [&](std::size_t i) {
    long long v = params[i];
    if (v < -1000000000LL || v > 1000000000LL) bad_spec(spec, "parameter out of range");
    return static_cast<int>(v);
  };
  if (kind == "cycle") {
    need(1);
    return cycle(as_int(0));
  }
  if (kind == "complete") {
    need(1);
    return complete(as_int(0));
  }
  if (kind == "grid") {
    need(2);
    return grid(as_int(0), as_int(1));
  }
  if (kind == "torus") {
    need(2);
    return torus(as_int(0), as_int(1));
  }
  if (kind == "zdball") {
    need(2);
    return zd_ball(as_int(0), as_int(1));
  }
  if (kind == "zpath") {
    need(1);
    return z_path(as_int(0));
  }
  if (kind == "triangleleaf") {
    need(1);
    return triangle_leaf(as_int(0));
  }
  bad_spec(spec, "unknown generator '" + kind + "'");
}

std::vector<Vertex> Graph::shortest_path(Vertex v, std::span<const Vertex> targets) const {
  check_vertex(v);
  if (targets.empty()) throw std::invalid_argument("shortest_path: no targets");
  std::vector<int> dist(adj_.size(), -1);
  std::deque<Vertex> queue;
  for (Vertex t : targets) {
    check_vertex(t);
    if (dist[static_cast<std::size_t>(t)] != 0) {
      dist[static_cast<std::size_t>(t)] = 0;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex w : adj_[static_cast<std::size_t>(u)])
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(w);
      }
  }
  if (dist[static_cast<std::size_t>(v)] < 0)
    throw std::runtime_error("shortest_path: targets unreachable");
  std::vector<Vertex> path{v};
  Vertex cur = v;
  while (dist[static_cast<std::size_t>(cur)] > 0) {
    int want = dist[static_cast<std::size_t>(cur)] - 1;
    Vertex next = -1;
    for (Vertex w : adj_[static_cast<std::size_t>(cur)])
      if (dist[static_cast<std::size_t>(w)] == want) {
        next = w;  // adjacency is sorted, first hit is the smallest id
        break;
      }
    path.push_back(next);
    cur = next;
  }
  return path;
}

void Graph::write_edge_list(std::ostream& out) const {
  out << "# " << name_ << "\n";
  for (auto [u, v] : edges()) out << u << " " << v << "\n";
}

}  // namespace derw
