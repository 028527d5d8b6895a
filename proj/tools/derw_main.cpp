#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "derw/graph.hpp"
#include "derw/json_io.hpp"
#include "derw/montecarlo.hpp"
#include "derw/trapping.hpp"
#include "derw/walker.hpp"

namespace {

std::string config_scalar(const nlohmann::json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

// Expands `--config file.json` into `--key=value` tokens appended to the
// argument list. The file holds one flat JSON object whose keys mirror the
// active subcommand's flags; keys already present on the command line are
// skipped, so explicit flags win. Runs before CLI11 sees the arguments, which
// lets required flags be satisfied from the file.
void expand_config_args(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    if (!path.empty()) break;
  }
  if (path.empty()) return;

  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const nlohmann::json& v = it.value();
    if (key == "config" || v.is_null()) continue;
    if (v.is_object())
      throw std::invalid_argument("config: key \"" + key + "\" must be a flag value");
    std::string flag = "--" + key;
    bool on_command_line = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) { on_command_line = true; break; }
    if (on_command_line) continue;
    if (v.is_array())
      for (const nlohmann::json& e : v) args.push_back(flag + "=" + config_scalar(e));
    else
      args.push_back(flag + "=" + config_scalar(v));
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("--epsilon must be in (0, 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification engine for a crossing-number"
               " reinforced walk on finite graphs"};
  app.require_subcommand(1);
  // every subcommand takes --config: a flat JSON object whose keys mirror
  // that subcommand's flags, with explicit flags taking precedence; the file
  // is expanded into flags by expand_config_args before parsing
  std::string config_path;
  auto add_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "JSON file mirroring the flags; command line wins");
  };
  int rc = 0;

  // simulate
  struct {
    std::string graph;
    double beta = 1.0;
    long steps = 100000;
    std::uint64_t seed = 0;
    double epsilon = 1e-6;
    std::string trace;
    derw::Vertex start = -1;
  } sim;
  auto* simulate =
      app.add_subcommand("simulate", "Run one walk, print its record as JSON");
  add_config(simulate);
  simulate->add_option("--graph", sim.graph, "Graph spec or file:path")->required();
  simulate->add_option("--beta", sim.beta, "Reinforcement strength");
  simulate->add_option("--steps", sim.steps, "Step budget");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--epsilon", sim.epsilon, "Trap certification threshold");
  simulate->add_option("--trace", sim.trace, "Write a JSONL step trace here");
  simulate->add_option("--start", sim.start, "Start vertex (default: origin)");
  simulate->callback([&] {
    derw::Graph g = derw::Graph::from_spec(sim.graph);
    check_epsilon(sim.epsilon);
    if (sim.steps < 0) throw std::invalid_argument("--steps must be >= 0");
    derw::Vertex start = sim.start < 0 ? g.origin() : sim.start;
    g.check_vertex(start);
    derw::WalkerState s(g, start, sim.beta);
    derw::TrapObserver trap(g, sim.beta, sim.epsilon);
    std::optional<derw::NormTracker> norm;
    std::ofstream trace_out;
    std::optional<derw::TraceObserver> tracer;
    std::vector<derw::Observer*> obs{&trap};
    if (g.has_coordinates()) obs.push_back(&norm.emplace(g));
    if (!sim.trace.empty()) {
      trace_out = open_out(sim.trace);
      obs.push_back(&tracer.emplace(trace_out));
    }
    derw::RngStream rng(sim.seed);
    derw::TrialRecord rec = derw::run_walk(s, rng, sim.steps, obs);
    std::cout << derw::to_json(rec).dump(2) << "\n";
  });

  // experiment
  struct {
    std::string kind;
    std::string graph = "cycle:3";
    double beta = 1.0;
    long trials = 1;
    long steps = 100000;
    std::uint64_t seed = 0;
    double epsilon = 1e-6;
    std::vector<int> radii;
    int max_turns = 8;
    long max_renewals = 1000;
    int jobs = 1;
    std::string out;
  } exp;
  auto* experiment =
      app.add_subcommand("experiment", "Run a scripted experiment, print stats JSON");
  add_config(experiment);
  experiment->add_option("--kind", exp.kind,
                         "trap_census|lln|turn_bound|escape_decay|renewal|"
                         "coupling|oned_equiv")
      ->required();
  experiment->add_option("--graph", exp.graph, "Graph spec or file:path");
  experiment->add_option("--beta", exp.beta, "Reinforcement strength");
  experiment->add_option("--trials", exp.trials, "Number of trials");
  experiment->add_option("--steps", exp.steps, "Step budget per trial");
  experiment->add_option("--seed", exp.seed, "Random seed (trial t uses stream (seed, t))");
  experiment->add_option("--epsilon", exp.epsilon, "Trap certification threshold");
  experiment->add_option("--radii", exp.radii, "Radii for escape_decay/coupling")
      ->delimiter(',');
  experiment->add_option("--max-turns", exp.max_turns, "Turn horizon for turn_bound");
  experiment->add_option("--max-renewals", exp.max_renewals,
                         "Plan budget per trial for renewal");
  experiment->add_option("--jobs", exp.jobs,
                         "Worker threads for record-producing kinds");
  experiment->add_option("--out", exp.out, "Write per-trial CSV here");
  experiment->callback([&] {
    derw::ExperimentSpec spec;
    spec.kind = derw::experiment_kind_from_string(exp.kind);
    spec.graph_spec = exp.graph;
    spec.beta = exp.beta;
    spec.trials = exp.trials;
    spec.max_steps = exp.steps;
    spec.epsilon = exp.epsilon;
    spec.seed = exp.seed;
    spec.radii = exp.radii;
    spec.max_turns = exp.max_turns;
    spec.max_renewals = exp.max_renewals;
    spec.jobs = exp.jobs;
    spec.validate();
    bool record_kind = spec.kind == derw::ExperimentKind::trap_census ||
                       spec.kind == derw::ExperimentKind::escape_decay;
    derw::SummaryStats stats;
    if (record_kind) {
      std::vector<derw::TrialRecord> records = derw::run_trials(spec);
      if (!exp.out.empty()) {
        std::ofstream csv = open_out(exp.out);
        derw::write_trial_csv(csv, records, spec.seed);
      }
      stats = derw::summarize_records(spec, records);
    } else {
      if (!exp.out.empty())
        throw std::invalid_argument(
            "--out: this experiment kind has no per-trial records");
      stats = derw::run_experiment(spec);
    }
    nlohmann::ordered_json o;
    o["spec"] = derw::to_json(spec);
    o["stats"] = derw::to_json(stats);
    std::cout << o.dump(2) << "\n";
  });

  // bounds
  struct {
    int ell = 3;
    int degree = 2;
    double gap = 0.0;
    long turns = 1;
    double beta = 1.0;
    long vertices = 0;
  } bnd;
  auto* bounds = app.add_subcommand("bounds", "Print the circuit bound values");
  add_config(bounds);
  bounds->add_option("--ell", bnd.ell, "Circuit length")->required();
  bounds->add_option("--degree", bnd.degree, "Degree bound")->required();
  bounds->add_option("--gap", bnd.gap, "Current circuit gap")->required();
  bounds->add_option("--turns", bnd.turns, "Number of further turns")->required();
  bounds->add_option("--beta", bnd.beta, "Reinforcement strength")->required();
  bounds->add_option("--vertices", bnd.vertices,
                     "Vertex count; adds the uniform trapping bound");
  bounds->callback([&] {
    std::cout << "turn_bound "
              << derw::format10(derw::turn_probability_lower_bound(
                     bnd.ell, bnd.degree, bnd.gap, bnd.turns, bnd.beta))
              << "\n";
    std::cout << "residual_escape "
              << derw::format10(derw::residual_escape_bound(bnd.ell, bnd.degree,
                                                            bnd.gap, bnd.beta))
              << "\n";
    if (bnd.vertices > 0)
      std::cout << "trap_bound "
                << derw::format10(derw::trap_probability_lower_bound(
                       bnd.vertices, bnd.degree, bnd.beta))
                << "\n";
  });

  // verify-1d
  struct {
    double beta = 1.0;
    long steps = 500;
    std::uint64_t seed = 0;
    long trials = 100;
    std::string graph = "zpath:50";
  } v1;
  auto* verify =
      app.add_subcommand("verify-1d", "Engine vs closed form on the integer line");
  add_config(verify);
  verify->add_option("--beta", v1.beta, "Reinforcement strength");
  verify->add_option("--steps", v1.steps, "Interior step cap per trajectory");
  verify->add_option("--seed", v1.seed, "Random seed");
  verify->add_option("--trials", v1.trials, "Number of trajectories");
  verify->add_option("--graph", v1.graph, "Path graph spec");
  verify->callback([&] {
    derw::ExperimentSpec spec;
    spec.kind = derw::ExperimentKind::oned_equiv;
    spec.graph_spec = v1.graph;
    spec.beta = v1.beta;
    spec.trials = v1.trials;
    spec.max_steps = v1.steps;
    spec.seed = v1.seed;
    spec.validate();
    derw::SummaryStats stats = derw::run_experiment(spec);
    nlohmann::ordered_json o;
    o["spec"] = derw::to_json(spec);
    o["stats"] = derw::to_json(stats);
    std::cout << o.dump(2) << "\n";
    const auto& st = std::get<derw::OneDimEquivStats>(stats.data);
    if (!st.pass) {
      std::cerr << "verify-1d: engine and closed form disagree\n";
      rc = 2;
    }
  });

  // graph-gen
  struct {
    std::string spec;
    std::string out;
  } gen;
  auto* graph_gen = app.add_subcommand("graph-gen", "Write a graph as an edge list");
  add_config(graph_gen);
  graph_gen->add_option("--spec", gen.spec, "Graph spec")->required();
  graph_gen->add_option("--out", gen.out, "Output path (default: stdout)");
  graph_gen->callback([&] {
    derw::Graph g = derw::Graph::from_spec(gen.spec);
    if (gen.out.empty()) {
      g.write_edge_list(std::cout);
    } else {
      std::ofstream out = open_out(gen.out);
      g.write_edge_list(out);
    }
  });

  // circuits
  struct {
    std::string graph;
    int max_len = 0;
  } circ;
  auto* circuits =
      app.add_subcommand("circuits", "List circuit classes, one per line");
  add_config(circuits);
  circuits->add_option("--graph", circ.graph, "Graph spec or file:path")->required();
  circuits->add_option("--max-len", circ.max_len,
                       "Longest circuit length (default: vertex count)");
  circuits->callback([&] {
    derw::Graph g = derw::Graph::from_spec(circ.graph);
    int max_len = circ.max_len > 0 ? circ.max_len : g.vertex_count();
    for (const derw::Circuit& c : derw::enumerate_circuits(g, max_len)) {
      for (std::size_t i = 0; i < c.vertices.size(); ++i)
        std::cout << (i ? " " : "") << c.vertices[i];
      std::cout << "\n";
    }
  });

  try {
    if (argc > 0) app.name(argv[0]);
    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
    expand_config_args(args);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const derw::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
