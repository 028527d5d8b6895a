#include "derw/trapping.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace derw {

std::optional<TurnDetection> detect_turns(std::span<const Vertex> trajectory) {
  long n = static_cast<long>(trajectory.size());
  std::optional<TurnDetection> best;
  for (long ell = 3; ell <= n - 1; ++ell) {
    long root = n - 1 - ell;
    if (trajectory[static_cast<std::size_t>(n - 1)] !=
        trajectory[static_cast<std::size_t>(root)])
      continue;
    // one period of distinct vertices
    std::vector<Vertex> period(trajectory.begin() + root,
                               trajectory.begin() + (n - 1));
    std::vector<Vertex> sorted = period;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    // extend the periodic suffix backwards
    long s = root;
    while (s - 1 >= 0 && trajectory[static_cast<std::size_t>(s - 1)] ==
                             trajectory[static_cast<std::size_t>(s - 1 + ell)])
      --s;
    long turns = (n - 1 - s) / ell;
    long start = n - 1 - turns * ell;
    if (!best || turns > best->turns) {
      TurnDetection d;
      d.circuit.vertices.assign(trajectory.begin() + start,
                                trajectory.begin() + start + ell);
      d.start_time = start;
      d.turns = turns;
      best = std::move(d);
    }
  }
  return best;
}

namespace {

void dfs_circuits(const Graph& g, std::vector<Vertex>& path,
                  std::vector<char>& on_path, int max_len, long cap,
                  std::vector<Circuit>& out) {
  Vertex root = path.front();
  Vertex u = path.back();
  for (Vertex v : g.neighbors(u)) {
    if (v == root && path.size() >= 3) {
      // count each undirected class once: fix the direction by second < last
      if (path[1] < path.back()) {
        out.push_back(Circuit{path});
        if (static_cast<long>(out.size()) > cap)
          throw std::runtime_error("enumerate_circuits: more than " +
                                   std::to_string(cap) + " circuits");
      }
    } else if (v > root && !on_path[static_cast<std::size_t>(v)] &&
               static_cast<int>(path.size()) < max_len) {
      path.push_back(v);
      on_path[static_cast<std::size_t>(v)] = 1;
      dfs_circuits(g, path, on_path, max_len, cap, out);
      on_path[static_cast<std::size_t>(v)] = 0;
      path.pop_back();
    }
  }
}

}  // namespace

std::vector<Circuit> enumerate_circuits(const Graph& g, int max_len, long cap) {
  if (max_len < 3) throw std::invalid_argument("enumerate_circuits: max_len < 3");
  std::vector<Circuit> out;
  std::vector<char> on_path(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<Vertex> path;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    path.assign(1, s);
    on_path[static_cast<std::size_t>(s)] = 1;
    dfs_circuits(g, path, on_path, max_len, cap, out);
    on_path[static_cast<std::size_t>(s)] = 0;
  }
  std::sort(out.begin(), out.end(), [](const Circuit& a, const Circuit& b) {
    if (a.vertices.size() != b.vertices.size())
      return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  return out;
}

namespace {

// Gap of the circuit one full lap ago, assuming the last lap traversed
// exactly the circuit edges in order: each circuit edge loses one forward
// crossing, every other edge is untouched.
int gap_one_lap_back(const CrossingField& field, const Circuit& circuit) {
  const Graph& g = field.graph();
  const auto& vs = circuit.vertices;
  long best = std::numeric_limits<long>::max();
  for (std::size_t j = 0; j < vs.size(); ++j) {
    Vertex u = vs[j];
    Vertex next = vs[(j + 1) % vs.size()];
    Vertex prev = vs[(j + vs.size() - 1) % vs.size()];
    long on = field.crossing(u, next) - 1;
    for (Vertex y : g.neighbors(u)) {
      if (y == next) continue;
      long cy = field.crossing(u, y);
      if (y == prev) cy += 1;  // the lap decremented c(u, prev) by one
      best = std::min(best, on - cy);
    }
  }
  return static_cast<int>(best);
}

}  // namespace

TrapObserver::TrapObserver(const Graph& g, double beta, double epsilon)
    : g_(&g), beta_(beta), epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("trap observer: epsilon must lie in (0, 1)");
  if (!(beta > 0.0))
    throw std::invalid_argument("trap observer: beta must be positive");
  ring_capacity_ = static_cast<long>(g.vertex_count()) + 2;
  ring_.assign(static_cast<std::size_t>(ring_capacity_), -1);
  last_seen_.assign(static_cast<std::size_t>(g.vertex_count()), -1);
}

void TrapObserver::push(long t, Vertex v) {
  ring_[static_cast<std::size_t>(t % ring_capacity_)] = v;
  last_seen_[static_cast<std::size_t>(v)] = t;
}

Vertex TrapObserver::ring_at(long t) const {
  return ring_[static_cast<std::size_t>(t % ring_capacity_)];
}

void TrapObserver::on_start(const WalkerState& s) {
  push(s.step_count, s.position);
}

std::optional<StopReason> TrapObserver::turn_completed(const WalkerState& s) {
  Tracking& tr = *tracking_;
  tr.turns = (s.step_count - tr.onset) / tr.circuit.length();
  int gap = s.field.circuit_gap(tr.circuit);
  tr.increments.push_back(gap - tr.prev_gap);
  tr.prev_gap = gap;
  double residual = residual_escape_bound(tr.circuit.length(), g_->max_degree(),
                                          gap, beta_);
  if (residual > epsilon_) return std::nullopt;
  TrapCertificate cert;
  cert.circuit = tr.circuit;
  cert.first_trap_time = tr.onset;
  cert.turns_observed = tr.turns;
  cert.gap_at_detection = gap;
  cert.residual = residual;
  cert.beta = beta_;
  cert.degree_bound = g_->max_degree();
  cert.gap_at_onset = tr.gap_onset;
  cert.gap_increments = tr.increments;
  cert_ = std::move(cert);
  return StopReason::trapped;
}

bool TrapObserver::try_candidate(const WalkerState& s, long t, Vertex v) {
  long prev_t = last_seen_[static_cast<std::size_t>(v)];
  if (prev_t < 0) return false;
  long ell = t - prev_t;
  if (ell < 3 || ell > static_cast<long>(g_->vertex_count())) return false;
  Circuit candidate;
  candidate.vertices.reserve(static_cast<std::size_t>(ell));
  for (long i = prev_t; i < t; ++i) candidate.vertices.push_back(ring_at(i));
  std::vector<Vertex> sorted = candidate.vertices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return false;
  Tracking tr;
  tr.onset = prev_t;
  tr.turns = 1;
  tr.gap_onset = gap_one_lap_back(s.field, candidate);
  tr.prev_gap = tr.gap_onset;
  tr.circuit = std::move(candidate);
  tracking_ = std::move(tr);
  return true;
}

std::optional<StopReason> TrapObserver::after_step(const WalkerState& s) {
  long t = s.step_count;
  Vertex v = s.position;
  if (tracking_) {
    Tracking& tr = *tracking_;
    long offset = (t - tr.onset) % tr.circuit.length();
    if (v == tr.circuit.vertices[static_cast<std::size_t>(offset)]) {
      push(t, v);
      if (offset == 0) return turn_completed(s);
      return std::nullopt;
    }
    tracking_.reset();  // deviated; fall through to fresh detection
  }
  if (try_candidate(s, t, v)) {
    push(t, v);
    return turn_completed(s);
  }
  push(t, v);
  return std::nullopt;
}

void TrapObserver::finalize(TrialRecord& rec) const {
  if (cert_) rec.certificate = cert_;
}

std::unique_ptr<Observer> make_trap_observer(const Graph& g, double beta,
                                             double epsilon) {
  return std::make_unique<TrapObserver>(g, beta, epsilon);
}

}  // namespace derw
