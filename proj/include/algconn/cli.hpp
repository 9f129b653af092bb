#pragma once

// Command implementations behind the algconn executable. Each command writes
// CSV to a stream so tests can drive it without a subprocess.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "algconn/consensus.hpp"
#include "algconn/datasets.hpp"
#include "algconn/error.hpp"
#include "algconn/fetch.hpp"
#include "algconn/graph.hpp"
#include "algconn/optimizer.hpp"
#include "algconn/perturb_directed.hpp"
#include "algconn/perturb_undirected.hpp"
#include "algconn/random.hpp"
#include "algconn/spectral.hpp"

#ifndef ALGCONN_DEFAULT_MANIFEST
#define ALGCONN_DEFAULT_MANIFEST "datasets/manifest.json"
#endif

namespace algconn::cli {

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> datasets;
  bool directed = false;
  bool bidirect = false;
  std::vector<std::string> strategies;
  std::size_t k = 10;
  std::optional<double> epsilon;
  std::optional<double> alpha;
  std::uint64_t seed = 42;
  std::string out;
  std::string norm = "1";
  bool frozen_scores = false;
  unsigned threads = 1;
  bool timing = false;
  bool exact_w = false;
  std::string lower_form = "published";
  std::optional<double> t_end;
  std::optional<double> dt;
  double window = 0.5;
  std::string manifest = ALGCONN_DEFAULT_MANIFEST;
};

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// Inputs in command-line order: files first, then datasets. Undirected
/// graphs are bidirected on request.
inline std::vector<NamedGraph> load_graphs(const RunConfig& cfg) {
  std::vector<NamedGraph> out;
  for (const auto& path : cfg.inputs)
    out.push_back({std::filesystem::path(path).stem().string(),
                   read_edge_list_file(path, cfg.directed)});
  for (const auto& name : cfg.datasets) {
    Graph g = load_dataset(name, cfg.directed);
    if (cfg.directed && !g.directed() && !cfg.bidirect)
      throw UsageError("dataset '" + name + "' is undirected; pass --bidirect for a digraph");
    out.push_back({name, std::move(g)});
  }
  if (out.empty()) throw UsageError("no input: pass --input PATH or --dataset NAME");
  for (auto& ng : out)
    if (cfg.bidirect && !ng.graph.directed()) ng.graph = bidirected(ng.graph);
  return out;
}

/// Giant component or largest strongly connected component.
inline Graph extract_component(const Graph& g) {
  if (!g.directed()) {
    Graph c = giant_component(g);
    if (c.node_count() < 2) throw DataError("giant component has a single node");
    return c;
  }
  Graph c = largest_scc(g);
  if (c.node_count() < 2) throw DataError("empty nontrivial strongly connected component");
  return c;
}

inline const Graph& single_graph(const std::vector<NamedGraph>& gs) {
  if (gs.size() != 1) throw UsageError("this command takes exactly one input");
  return gs.front().graph;
}

/// network,N,L,lambda1,mu,type with mu replaced by Re(mu) for digraphs.
inline void cmd_stats(const RunConfig& cfg, std::ostream& out) {
  const auto graphs = load_graphs(cfg);
  out << "network,N,L,lambda1,mu,type\n";
  char buf[256];
  for (const auto& ng : graphs) {
    const Graph c = extract_component(ng.graph);
    const double lambda1 = spectral_radius_adjacency(c);
    const double mu = generalized_algebraic_connectivity(c);
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6g,%.6g,%s\n", ng.name.c_str(), c.node_count(),
                  c.link_count(), lambda1, mu, c.directed() ? "directed" : "undirected");
    out << buf;
  }
}

inline OptimizerOptions optimizer_options(const RunConfig& cfg) {
  OptimizerOptions o;
  o.threads = cfg.threads;
  o.seed = cfg.seed;
  o.epsilon = cfg.epsilon;
  o.alpha = cfg.alpha;
  o.exact_w = cfg.exact_w;
  o.frozen_scores = cfg.frozen_scores;
  if (cfg.lower_form == "published") o.lower_form = LowerMetricForm::published;
  else if (cfg.lower_form == "substituted") o.lower_form = LowerMetricForm::substituted;
  else throw UsageError("--lower-form must be published or substituted");
  return o;
}

/// One row per inserted link; wall_ms stays empty unless timing is requested
/// so that repeated runs are byte-identical.
inline void write_trace_csv(std::ostream& out, const GreedyTrace& t, bool timing) {
  out << "iteration,source_label,target_label,metric_score,exact_objective,wall_ms\n";
  for (const auto& s : t.steps) {
    out << s.iteration << ',' << t.graph.label(s.link.source) << ','
        << t.graph.label(s.link.target) << ',' << num(s.score) << ',' << num(s.objective) << ',';
    if (timing) out << num(s.wall_ms);
    out << '\n';
  }
}

/// Runs every requested strategy. With --out each trace goes to
/// <out>/<tag>.csv; without it a single trace is written to `out`.
inline void cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  const Graph g = extract_component(single_graph(load_graphs(cfg)));
  if (cfg.strategies.empty()) throw UsageError("--strategy is required");
  std::vector<Strategy> strategies;
  for (const auto& s : cfg.strategies) {
    strategies.push_back(parse_strategy(s));
    require_compatible(strategies.back(), g);
  }
  if (cfg.out.empty() && strategies.size() > 1)
    throw UsageError("several strategies need --out DIR");
  const OptimizerOptions opt = optimizer_options(cfg);
  if (!cfg.out.empty()) std::filesystem::create_directories(cfg.out);
  for (const Strategy s : strategies) {
    const GreedyTrace trace = run_strategy(g, cfg.k, s, opt);
    if (cfg.out.empty()) {
      write_trace_csv(out, trace, cfg.timing);
      continue;
    }
    const auto path = std::filesystem::path(cfg.out) / (std::string(tag(s)) + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    write_trace_csv(f, trace, cfg.timing);
  }
}

/// Repeatedly picks a random node with at least two non-neighbours and links
/// it to two of them at random, until k links are added. Estimates use the
/// operator of the starting graph and the accumulated perturbation.
inline void cmd_perturb_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph start = extract_component(single_graph(load_graphs(cfg)));
  if (start.directed()) throw UsageError("perturb-check needs an undirected graph");
  const ShiftOperator op = build_shift_operator(start, cfg.epsilon);
  const double mu0 = algebraic_connectivity(start).value;
  const std::size_t n = start.node_count();
  Rng rng(cfg.seed);
  Graph g = start;
  std::vector<Link> added;
  out << "K,exact_mu,first_order,second_order\n";
  auto emit = [&] {
    const auto p = make_perturbation(n, added);
    out << added.size() << ',' << num(algebraic_connectivity(g).value) << ','
        << num(mu0 + estimate_mu_first_order(op, p)) << ','
        << num(mu0 + estimate_mu_second_order(op, p)) << '\n';
  };
  emit();
  while (added.size() < cfg.k) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < n; ++i)
      if (n - 1 - g.degree(i) >= 2) eligible.push_back(i);
    if (eligible.empty()) {
      err << "perturb-check: stopped early at K=" << added.size()
          << ": no node has two free partners\n";
      break;
    }
    const std::size_t v = eligible[uniform_index(rng, eligible.size())];
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < n; ++j)
      if (j != v && !g.has_link(v, j)) free.push_back(j);
    for (int t = 0; t < 2; ++t) {
      const std::size_t pick = uniform_index(rng, free.size());
      const Link l = g.canonical({v, free[pick]});
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(pick));
      g = g.with_link(l);
      added.push_back(l);
    }
    emit();
  }
}

/// Simulates from a seeded generic state and reports the fitted decay rate
/// next to the (generalized) algebraic connectivity.
inline void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Graph g = extract_component(single_graph(load_graphs(cfg)));
  const double bound = generalized_algebraic_connectivity(g);
  const double t_end = cfg.t_end.value_or(18.0 / bound);
  const double dt = cfg.dt.value_or(default_step(g));
  const Vector v0 = generic_initial_state(g, cfg.seed);
  const Trajectory traj = simulate(g, v0, t_end, dt);
  const double rate = fit_decay_rate(traj, cfg.window);
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw DataError("cannot write " + cfg.out);
    write_trajectory_csv(f, traj);
  }
  out << "quantity,value\n"
      << "decay_rate," << num(rate) << '\n'
      << "connectivity," << num(bound) << '\n'
      << "t_end," << num(t_end) << '\n'
      << "dt," << num(dt) << '\n';
}

inline NormKind parse_norm(const std::string& s) {
  if (s == "1") return NormKind::one;
  if (s == "2") return NormKind::two;
  if (s == "inf") return NormKind::inf;
  throw UsageError("--norm must be 1, 2 or inf");
}

/// For every absent arc of a digraph: the lower bound, exact change and
/// upper bound of Re(mu) after adding it.
inline void cmd_bound_check(const RunConfig& cfg, std::ostream& out) {
  const Graph g = extract_component(single_graph(load_graphs(cfg)));
  if (!g.directed()) throw UsageError("bound-check needs a directed graph");
  const NormKind norm = parse_norm(cfg.norm);
  const LaplacianMatrix lap = laplacian(g);
  const DirectedBoundContext ctx =
      build_directed_context(lap, {cfg.epsilon, cfg.alpha, cfg.exact_w});
  const double before = generalized_algebraic_connectivity(g);
  out << "source_label,target_label,lower_bound,exact_change,upper_bound\n";
  for (const Link& arc : candidate_links(g)) {
    const auto p = make_perturbation(g.node_count(), {arc}, true);
    const double exact = generalized_algebraic_connectivity(g.with_link(arc)) - before;
    const UpperBoundValue ub = upper_bound_increment(ctx, lap, p, norm);
    out << g.label(arc.source) << ',' << g.label(arc.target) << ','
        << num(lower_bound_increment(ctx, p)) << ',' << num(exact) << ','
        << (ub.vacuous ? std::string("inf") : num(ub.value)) << '\n';
  }
}

/// Downloads the named manifest entries (all of them when none are named).
inline void cmd_fetch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto entries = read_manifest(cfg.manifest);
  const auto dir = data_dir();
  std::size_t done = 0;
  for (const auto& e : entries) {
    if (!cfg.datasets.empty() &&
        std::find(cfg.datasets.begin(), cfg.datasets.end(), e.name) == cfg.datasets.end())
      continue;
    const FetchResult r = fetch_dataset(e, dir);
    if (!r.pinned) err << "fetch: " << e.name << " has no pinned hash; sha256=" << r.sha256 << '\n';
    out << e.name << ',' << r.path.string() << ',' << r.bytes << ',' << r.sha256 << '\n';
    ++done;
  }
  for (const auto& want : cfg.datasets) {
    bool known = false;
    for (const auto& e : entries) known = known || e.name == want;
    if (!known) throw UsageError("dataset '" + want + "' is not in the manifest");
  }
  if (done == 0) throw UsageError("nothing to fetch");
}

inline int exit_code_for(const std::exception_ptr& ep, std::ostream& err) {
  try {
    std::rethrow_exception(ep);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

/// Parses arguments and dispatches. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Maximise the algebraic connectivity of a network by adding links"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.inputs, "Edge-list file (repeatable)");
    sub->add_option("--dataset", cfg.datasets, "Bundled or cached dataset, or generator like cycle:20");
    sub->add_flag("--directed", cfg.directed, "Read edge lists as directed");
    sub->add_flag("--bidirect", cfg.bidirect, "Replace each undirected link by two arcs");
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--epsilon", cfg.epsilon, "Shift-operator step (default 1/(d_max+1))");
  };

  auto* stats = app.add_subcommand("stats", "Component size, lambda1 and (Re) mu");
  add_inputs(stats);

  auto* optimize = app.add_subcommand("optimize", "Greedy link addition traces");
  add_inputs(optimize);
  optimize->add_option("--strategy", cfg.strategies, "Strategy tag(s)")->delimiter(',')->required();
  optimize->add_option("--k", cfg.k, "Number of links to add")->capture_default_str();
  optimize->add_option("--alpha", cfg.alpha, "Exponential-operator scale");
  optimize->add_option("--out", cfg.out, "Output directory, one CSV per strategy");
  optimize->add_flag("--frozen-scores", cfg.frozen_scores, "Score nodes once for baselines");
  optimize->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  optimize->add_flag("--timing", cfg.timing, "Fill the wall_ms column");
  optimize->add_flag("--exact-w", cfg.exact_w, "Use the exact exponential in the upper metric");
  optimize->add_option("--lower-form", cfg.lower_form, "published or substituted");

  auto* perturb = app.add_subcommand("perturb-check", "Exact mu against the perturbation estimates");
  add_inputs(perturb);
  perturb->add_option("--k", cfg.k, "Links to add, two per step")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Consensus dynamics and fitted decay rate");
  add_inputs(sim);
  sim->add_option("--t-end", cfg.t_end, "Integration horizon (default 18 / mu)");
  sim->add_option("--dt", cfg.dt, "RK4 step (default 0.01 / lambda_max(Q))");
  sim->add_option("--window", cfg.window, "Fraction of samples used in the fit");
  sim->add_option("--out", cfg.out, "Trajectory CSV path");

  auto* bounds = app.add_subcommand("bound-check", "Re(mu) bounds for every absent arc");
  add_inputs(bounds);
  bounds->add_option("--alpha", cfg.alpha, "Exponential-operator scale");
  bounds->add_option("--norm", cfg.norm, "Matrix norm in the upper bound")
      ->check(CLI::IsMember({"1", "2", "inf"}))
      ->capture_default_str();
  bounds->add_flag("--exact-w", cfg.exact_w, "Use the exact exponential for W");

  auto* fetch = app.add_subcommand("fetch", "Download datasets listed in the manifest");
  fetch->add_option("--dataset", cfg.datasets, "Names to fetch (default all)");
  fetch->add_option("--manifest", cfg.manifest, "Manifest path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int rc = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return rc == 0 ? 0 : 1;
  }

  try {
    if (stats->parsed()) cmd_stats(cfg, out);
    else if (optimize->parsed()) cmd_optimize(cfg, out);
    else if (perturb->parsed()) cmd_perturb_check(cfg, out, err);
    else if (sim->parsed()) cmd_simulate(cfg, out);
    else if (bounds->parsed()) cmd_bound_check(cfg, out);
    else if (fetch->parsed()) cmd_fetch(cfg, out, err);
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
  return 0;
}

}  // namespace algconn::cli
