#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "nbpr/fault.hpp"
#include "nbpr/graph.hpp"
#include "nbpr/pagerank.hpp"
#include "nbpr/report.hpp"
#include "nbpr/rmat.hpp"

namespace nbpr::cli {

namespace {

struct RunOptions {
  std::string variant = "seq";
  std::string graph;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  double threshold = 1e-16;
  std::uint64_t max_iters = 10000;
  double damping = 0.85;
  bool perforate = false;
  bool identical = false;
  std::uint64_t seed = 0;
  bool verify = false;
  double l1_bound = 1e-10;
  std::vector<std::string> sleeps;
  std::vector<std::string> kills;
  double watchdog_s = 0;
  std::string csv_out;
};

void add_run_flags(CLI::App& app, RunOptions& o, bool single_variant) {
  if (single_variant) app.add_option("--variant", o.variant, "seq, barrier, barrier-edge, barrier-opt, nosync, nosync-edge, nosync-opt, waitfree");
  app.add_option("--graph", o.graph, "edge list (.txt) or CSR cache (.bin)")->required();
  if (single_variant) app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--threshold", o.threshold, "convergence threshold on max per-vertex change");
  app.add_option("--max-iters", o.max_iters, "iteration cap");
  app.add_option("--damping", o.damping, "damping factor d");
  app.add_flag("--perforate", o.perforate, "loop perforation (barrier/nosync)");
  app.add_flag("--identical", o.identical, "identical-node preprocessing");
  app.add_option("--seed", o.seed, "seed recorded with the run");
  app.add_option("--sleep", o.sleeps, "tid:iter:ms, iter may be '*'")->take_all();
  app.add_option("--kill", o.kills, "tid:iter")->take_all();
  app.add_option("--watchdog-s", o.watchdog_s, "cancel runs exceeding this many seconds (0: 60 s when faults are set, else off)");
  app.add_option("--csv-out", o.csv_out, "also append CSV rows to this file");
}

RunConfig make_config(const RunOptions& o, Variant v, unsigned threads) {
  RunConfig cfg;
  cfg.variant = v;
  cfg.threads = threads;
  cfg.threshold = o.threshold;
  cfg.max_iters = o.max_iters;
  cfg.damping = o.damping;
  cfg.perforation = o.perforate;
  cfg.identical_preproc = o.identical;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

FaultPlan make_plan(const RunOptions& o) {
  FaultPlan plan;
  for (const auto& s : o.sleeps) plan.sleeps.push_back(parse_sleep(s));
  for (const auto& k : o.kills) plan.kills.push_back(parse_kill(k));
  return plan;
}

std::chrono::milliseconds watchdog_for(const RunOptions& o, const FaultPlan& plan) {
  if (o.watchdog_s > 0) return std::chrono::milliseconds(static_cast<std::int64_t>(o.watchdog_s * 1000));
  if (!plan.empty()) return std::chrono::seconds(60);
  return std::chrono::hours(24 * 365);
}

Variant variant_or_throw(const std::string& name) {
  auto v = parse_variant(name);
  if (!v) throw ValidationError("unknown variant \"" + name + "\"");
  return *v;
}

std::string graph_label(const std::string& path) { return std::filesystem::path(path).stem().string(); }

void append_csv(const std::string& path, const std::string& header, const std::vector<std::string>& rows) {
  if (path.empty()) return;
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open " + path);
  if (fresh) out << header << '\n';
  for (const auto& row : rows) out << row << '\n';
}

RunReport sequential_reference(const CsrGraph& g, const RunConfig& cfg) {
  RunConfig seq = cfg;
  seq.variant = Variant::Sequential;
  seq.threads = 1;
  seq.perforation = false;
  seq.identical_preproc = false;
  seq.max_iters = std::max<std::uint64_t>(cfg.max_iters, RunConfig{}.max_iters);
  return pagerank_sequential(g, seq);
}

int cmd_run(const RunOptions& o, std::ostream& out) {
  const Variant v = variant_or_throw(o.variant);
  const RunConfig cfg = make_config(o, v, o.threads);
  const FaultPlan plan = make_plan(o);
  plan.validate(cfg.threads);
  const CsrGraph g = load_graph(o.graph);

  RunReport report = run_with_faults(g, cfg, plan, watchdog_for(o, plan));
  report.graph = graph_label(o.graph);
  if (o.verify) report.l1_vs_oracle = l1_norm(report.ranks, sequential_reference(g, cfg).ranks);

  const std::string row = csv_row(report);
  out << kCsvHeader << '\n' << row << '\n';
  append_csv(o.csv_out, std::string(kCsvHeader), {row});
  return report.converged() ? kExitOk : kExitNotConverged;
}

int cmd_bench(const RunOptions& o, const std::vector<std::string>& variants,
              const std::vector<unsigned>& thread_counts, unsigned repeats, std::ostream& out) {
  std::vector<Variant> chosen;
  for (const auto& name : variants) chosen.push_back(variant_or_throw(name));
  if (thread_counts.empty()) throw ValidationError("bench needs at least one thread count");
  for (unsigned p : thread_counts)
    for (Variant v : chosen) make_config(o, v, p);
  const FaultPlan plan = make_plan(o);
  const CsrGraph g = load_graph(o.graph);
  const auto watchdog = watchdog_for(o, plan);
  const std::string header = std::string(kCsvHeader) + ",speedup";

  RunOptions seq_opts = o;
  seq_opts.perforate = false;
  seq_opts.identical = false;
  const RunConfig seq_cfg = make_config(seq_opts, Variant::Sequential, 1);
  TimedRuns seq = time_with_faults(g, seq_cfg, FaultPlan{}, watchdog, repeats);
  const std::vector<double> reference = seq.runs.front().ranks;

  std::vector<std::string> rows;
  auto emit = [&](RunReport r, std::int64_t median) {
    r.graph = graph_label(o.graph);
    r.wall_time_ns = median;
    if (o.verify) r.l1_vs_oracle = l1_norm(r.ranks, reference);
    const double speedup =
        median > 0 ? static_cast<double>(seq.median_wall_ns) / static_cast<double>(median) : 0.0;
    rows.push_back(csv_row(r) + ',' + format_double(speedup));
  };
  emit(seq.runs.front(), seq.median_wall_ns);
  bool all_converged = seq.runs.front().converged();
  for (unsigned p : thread_counts) {
    for (Variant v : chosen) {
      if (v == Variant::Sequential) continue;
      const RunConfig cfg = make_config(o, v, p);
      plan.validate(p);
      TimedRuns timed = time_with_faults(g, cfg, plan, watchdog, repeats);
      all_converged = all_converged && timed.runs.front().converged();
      emit(timed.runs.front(), timed.median_wall_ns);
    }
  }
  out << header << '\n';
  for (const auto& row : rows) out << row << '\n';
  append_csv(o.csv_out, header, rows);
  return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_verify(const RunOptions& o, std::ostream& out) {
  const Variant v = variant_or_throw(o.variant);
  const RunConfig cfg = make_config(o, v, o.threads);
  const CsrGraph g = load_graph(o.graph);
  const RunReport report = run_pagerank(g, cfg);
  const RunReport seq = sequential_reference(g, cfg);
  const double l1 = l1_norm(report.ranks, seq.ranks);
  out << "variant=" << report_label(report) << '\n';
  out << "threads=" << report.threads << '\n';
  out << "outcome=" << to_string(report.outcome) << '\n';
  out << "l1_vs_sequential=" << format_double(l1) << '\n';
  if (g.num_vertices() <= kDenseOracleLimit) {
    RunConfig dense_cfg = cfg;
    dense_cfg.perforation = false;
    dense_cfg.identical_preproc = false;
    out << "l1_vs_dense=" << format_double(l1_norm(report.ranks, oracle_dense(g, dense_cfg))) << '\n';
  } else {
    out << "l1_vs_dense=skipped (n > " << kDenseOracleLimit << ", sequential oracle used)\n";
  }
  out << "max_residual=" << format_double(max_residual(g, report.ranks, cfg.damping)) << '\n';
  out << "l1_bound=" << format_double(o.l1_bound) << '\n';
  const bool pass = l1 <= o.l1_bound;
  out << "result=" << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitNotConverged;
}

int cmd_convert(const std::string& input, const std::string& output, bool no_dedup, std::size_t vertices,
                std::ostream& out) {
  EdgeList el = load_edge_list(std::filesystem::path(input));
  if (vertices != 0) {
    if (vertices < el.n) throw ValidationError("--vertices is smaller than the largest id + 1");
    el.n = vertices;
  }
  const CsrGraph g = build_csr(el, !no_dedup);
  save_csr(g, std::filesystem::path(output));
  out << "vertices=" << g.num_vertices() << " edges=" << g.num_edges() << " -> " << output << '\n';
  return kExitOk;
}

int cmd_generate(const RmatParams& params, const std::string& output, std::ostream& out) {
  const EdgeList el = rmat_generate(params);
  if (std::filesystem::path(output).extension() == ".bin") {
    save_csr(build_csr(el), std::filesystem::path(output));
  } else {
    std::ofstream file(output);
    if (!file) throw Error("cannot open " + output);
    file << "# rmat edges=" << params.target_edges << " a=" << params.a << " b=" << params.b
         << " c=" << params.c << " d=" << params.d << " seed=" << params.seed << '\n';
    for (const Edge& e : el.edges) file << e.src << ' ' << e.dst << '\n';
  }
  out << "vertices=" << el.n << " edges=" << el.edges.size() << " -> " << output << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel PageRank: barrier, lock-free and wait-free variants"};
  app.require_subcommand(1);

  std::string convert_in, convert_out;
  bool no_dedup = false;
  std::size_t convert_vertices = 0;
  auto* convert = app.add_subcommand("convert", "edge list -> binary CSR cache");
  convert->add_option("--input", convert_in)->required();
  convert->add_option("--output", convert_out)->required();
  convert->add_flag("--no-dedup", no_dedup, "keep duplicate edges and self-loops");
  convert->add_option("--vertices", convert_vertices, "vertex count (default: largest id + 1)");

  RmatParams rmat;
  std::string generate_out;
  auto* generate = app.add_subcommand("generate", "RMAT synthetic graph");
  generate->add_option("--edges", rmat.target_edges)->required();
  generate->add_option("--a", rmat.a);
  generate->add_option("--b", rmat.b);
  generate->add_option("--c", rmat.c);
  generate->add_option("--d", rmat.d);
  generate->add_option("--seed", rmat.seed);
  generate->add_option("--scale", rmat.scale, "log2 vertex count (default: about two edges per vertex)");
  generate->add_option("--output", generate_out, ".txt edge list or .bin CSR cache")->required();

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "run one variant and print a CSV row");
  add_run_flags(*run_cmd, run_opts, true);
  run_cmd->add_flag("--verify", run_opts.verify, "fill the l1 column against the sequential result");

  RunOptions bench_opts;
  std::vector<std::string> bench_variants{"barrier", "nosync", "waitfree"};
  std::vector<unsigned> bench_threads{1, 2, 4};
  unsigned repeats = 3;
  auto* bench = app.add_subcommand("bench", "time variants across thread counts");
  add_run_flags(*bench, bench_opts, false);
  bench->add_option("--variants", bench_variants)->delimiter(',');
  bench->add_option("--thread-counts", bench_threads)->delimiter(',');
  bench->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  bench->add_flag("--verify", bench_opts.verify, "fill the l1 column against the sequential result");

  RunOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "compare a variant against the oracles");
  add_run_flags(*verify, verify_opts, true);
  verify->add_option("--l1-bound", verify_opts.l1_bound, "pass when L1 to sequential is at most this");

  std::vector<std::string> argv_storage{"nbpr"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*convert) return cmd_convert(convert_in, convert_out, no_dedup, convert_vertices, out);
    if (*generate) return cmd_generate(rmat, generate_out, out);
    if (*run_cmd) return cmd_run(run_opts, out);
    if (*bench) return cmd_bench(bench_opts, bench_variants, bench_threads, repeats, out);
    if (*verify) return cmd_verify(verify_opts, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace nbpr::cli
