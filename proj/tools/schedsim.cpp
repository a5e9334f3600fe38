// schedsim: generate instances, run the blocking/region schedulers, compute
// exact offline optima, verify run invariants, and sweep benchmark grids.

#include <CLI11.hpp>
#include <json.hpp>

#include "sched/blocking.hpp"
#include "sched/generator.hpp"
#include "sched/io.hpp"
#include "sched/oracle.hpp"
#include "sched/region.hpp"
#include "sched/verify.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sched;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rat parse_rat_flag(const std::string& s, const std::string& flag) {
  auto r = try_parse_frac(s);
  if (!r) throw UsageError(flag + ": expected a rational \"p/q\", got '" + s + "'");
  return *r;
}

CommitmentModel make_model(const std::string& name, const std::optional<Rat>& delta) {
  if (name == "none") return CommitmentModel::none();
  if (name == "admission") return CommitmentModel::upon_admission();
  if (name == "delta") {
    if (!delta) throw UsageError("--model delta requires --delta");
    return CommitmentModel::delta_commitment(*delta);
  }
  throw UsageError("unknown commitment model '" + name + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("SCHED_SIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

// --- gen ---

struct GenOpts {
  int n = 8;
  int m = 1;
  std::string epsilon = "1";
  std::string profile = "uniform";
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_gen(const GenOpts& o) {
  const Instance inst =
      generate(o.seed, o.n, o.m, parse_rat_flag(o.epsilon, "--epsilon"), parse_profile(o.profile));
  save_instance(inst, o.output);
  std::cout << "wrote " << o.output << " (n=" << inst.n() << ", m=" << inst.machines
            << ", epsilon=" << to_frac(inst.epsilon) << ")\n";
  return 0;
}

// --- run ---

struct RunOpts {
  std::string alg = "blocking";
  std::string model;
  std::string delta;
  std::string epsilon;  // optional override
  std::string instance;
  std::string outdir;
};

RunResult execute(const Instance& inst, const std::string& alg, const CommitmentModel& model) {
  if (alg == "blocking") return run_blocking(inst, model);
  if (alg == "region") {
    if (model.kind != CommitmentKind::None) {
      throw UsageError("the region algorithm runs without commitment (--model none)");
    }
    return run_region(inst);
  }
  throw UsageError("unknown algorithm '" + alg + "'");
}

Instance load_with_override(const std::string& path, const std::string& epsilon) {
  Instance inst = load_instance(path);
  if (!epsilon.empty()) {
    inst.epsilon = parse_rat_flag(epsilon, "--epsilon");
    const auto rep = validate(inst);
    if (!rep.ok()) {
      throw UsageError("instance is invalid under --epsilon " + epsilon + ":\n" + rep.describe());
    }
  }
  return inst;
}

int cmd_run(RunOpts o) {
  if (o.model.empty()) o.model = (o.alg == "region") ? "none" : "admission";
  std::optional<Rat> delta;
  if (!o.delta.empty()) delta = parse_rat_flag(o.delta, "--delta");
  const Instance inst = load_with_override(o.instance, o.epsilon);
  const CommitmentModel model = make_model(o.model, delta);
  const RunResult res = execute(inst, o.alg, model);

  fs::create_directories(o.outdir);
  write_file(fs::path(o.outdir) / "trace.csv", trace_to_csv(res.trace));
  write_file(fs::path(o.outdir) / "summary.json", summary_to_json(res.trace));
  write_file(fs::path(o.outdir) / "admissions.json", admission_log_to_json(res.log));
  std::cout << "admitted=" << res.trace.admitted_count()
            << " on_time=" << res.trace.on_time_count() << " -> " << o.outdir << "\n";
  return 0;
}

// --- oracle ---

struct OracleOpts {
  std::string instance;
  std::string output;
  int max_jobs = 14;
  int max_machines = 3;
};

int cmd_oracle(const OracleOpts& o) {
  const Instance inst = load_instance(o.instance);
  const OracleCaps caps{o.max_jobs, o.max_machines};
  std::string text;
  if (const auto res = opt_throughput(inst, caps)) {
    text = oracle_to_json(res->value, true, &*res);
  } else {
    text = oracle_to_json(opt_upper_bound(inst), false, nullptr);
  }
  if (o.output.empty()) {
    std::cout << text;
  } else {
    write_file(o.output, text);
  }
  return 0;
}

// --- verify ---

struct VerifyOpts {
  std::string alg = "blocking";
  std::string model;
  std::string delta;
  std::string instance;
  std::string report;
  int max_jobs = 14;
  int max_machines = 3;
};

int cmd_verify(VerifyOpts o) {
  if (o.model.empty()) o.model = (o.alg == "region") ? "none" : "admission";
  std::optional<Rat> delta;
  if (!o.delta.empty()) delta = parse_rat_flag(o.delta, "--delta");
  const Instance inst = load_instance(o.instance);
  const CommitmentModel model = make_model(o.model, delta);
  const RunResult res = execute(inst, o.alg, model);

  VerifyParams vp;
  std::optional<BlockingParams> bprm;
  if (o.alg == "blocking") {
    bprm = derive_params(inst.epsilon, model);
    vp = VerifyParams::blocking(*bprm);
  } else {
    vp = VerifyParams::region(region_params(inst.epsilon));
  }
  const ThresholdTimeline tl = extract_threshold(inst, res.log, res.trace, vp);

  json checks = json::object();
  bool all_ok = true;
  auto record = [&](const std::string& name, const CheckResult& r) {
    checks[name] = {{"ok", r.ok}, {"problems", r.problems}};
    all_ok = all_ok && r.ok;
    std::cout << (r.ok ? "ok   " : "FAIL ") << name << "\n";
    for (const auto& p : r.problems) std::cout << "     " << p << "\n";
  };

  record("trace", check_trace(inst, res.trace));
  record("log-trace-agreement", check_log_trace_agreement(res.log, res.trace));
  record("p1-p2", check_p1_p2(inst, res.log, tl, vp));
  record("segment-counts", check_segment_counts(inst, res.log, tl, vp));
  if (bprm) {
    record("interval-structure", check_interval_structure(inst, *bprm, res.log));
    record("log-consistency", check_log_consistency(inst, *bprm, res.log));
    CheckResult commit;
    for (const auto& v : commit_check(inst, *bprm, model, res.log, res.trace)) {
      commit.fail("job " + std::to_string(v.job) + ": " + v.clause);
    }
    record("commitment", commit);
  } else {
    CheckResult half;
    const auto split = outcome_split(inst, res.trace);
    if (2 * split.finished.size() < split.finished.size() + split.late.size()) {
      half.fail("fewer than half of the admitted jobs finished on time");
    }
    record("half-completion", half);
  }

  json bound = nullptr;
  const OracleCaps caps{o.max_jobs, o.max_machines};
  if (const auto opt = opt_throughput(inst, caps)) {
    record("volume-lemma", check_volume_lemma(inst, res.log, tl, vp, *opt));
    const BoundReport rep = check_bounds(inst, vp, res.log, res.trace, opt->value);
    CheckResult bc;
    if (!rep.opt_within_bound) bc.fail("OPT exceeds the competitive bound");
    if (!rep.completion_ok) bc.fail("completion guarantee violated");
    record("competitive-bound", bc);
    bound = {{"opt", rep.opt},
             {"admitted", rep.admitted},
             {"on_time", rep.on_time},
             {"factor", to_frac(rep.factor)},
             {"bound", to_frac(rep.bound)},
             {"ratio", rep.ratio ? json(to_frac(*rep.ratio)) : json(nullptr)}};
  } else {
    std::cout << "note: instance exceeds oracle caps; bound checks skipped\n";
  }

  json report;
  report["algorithm"] = o.alg;
  report["model"] = o.model;
  report["instance"] = o.instance;
  report["epsilon"] = to_frac(inst.epsilon);
  report["checks"] = checks;
  report["bound"] = bound;
  report["ok"] = all_ok;
  if (!o.report.empty()) write_file(o.report, report.dump(2) + "\n");
  return all_ok ? 0 : 1;
}

// --- bench ---

struct BenchOpts {
  std::string alg = "region";
  std::string model;
  std::string epsilon_grid = "1/8,1/4,1/2,1";
  std::string delta_fracs;  // fractions of epsilon, e.g. "1/4,3/4"
  int per_point = 50;
  std::uint64_t seed = 7;
  int n = 10;
  int m = 2;
  std::string outdir = "bench";
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct BenchRow {
  std::uint64_t seed = 0;
  std::string profile;
  int n = 0;
  int m = 0;
  Rat epsilon;
  std::optional<Rat> delta;
  int admitted = 0;
  int on_time = 0;
  int opt = 0;
  bool opt_exact = false;
  std::optional<Rat> ratio;
  Rat bound_factor;
  int pass = -1;  // 1/0; -1 unknown (inexact opt above the bound)
};

int cmd_bench(BenchOpts o) {
  if (o.model.empty()) o.model = (o.alg == "region") ? "none" : "admission";
  std::vector<Rat> grid;
  for (const auto& tok : split_csv(o.epsilon_grid)) {
    grid.push_back(parse_rat_flag(tok, "--epsilon-grid"));
  }
  std::vector<std::optional<Rat>> fracs;
  if (o.model == "delta") {
    for (const auto& tok : split_csv(o.delta_fracs)) {
      fracs.push_back(parse_rat_flag(tok, "--delta-frac"));
    }
    if (fracs.empty()) throw UsageError("--model delta needs --delta-frac");
  } else {
    fracs.push_back(std::nullopt);
  }

  struct Task {
    Rat epsilon;
    std::optional<Rat> delta;
    std::uint64_t seed;
    Profile profile;
  };
  std::vector<Task> tasks;
  for (const Rat& eps : grid) {
    for (const auto& frac : fracs) {
      for (int k = 0; k < o.per_point; ++k) {
        const auto profile = static_cast<Profile>(k % 4);
        std::optional<Rat> delta;
        if (frac) delta = *frac * eps;
        tasks.push_back({eps, delta, o.seed + static_cast<std::uint64_t>(k), profile});
      }
    }
  }

  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& t = tasks[idx];
      const Instance inst = generate(t.seed, o.n, o.m, t.epsilon, t.profile);
      const CommitmentModel model =
          t.delta ? CommitmentModel::delta_commitment(*t.delta)
                  : (o.model == "admission" ? CommitmentModel::upon_admission()
                                            : CommitmentModel::none());
      const RunResult res = execute(inst, o.alg, model);
      VerifyParams vp;
      if (o.alg == "blocking") {
        vp = VerifyParams::blocking(derive_params(inst.epsilon, model));
      } else {
        vp = VerifyParams::region(region_params(inst.epsilon));
      }
      BenchRow row;
      row.seed = t.seed;
      row.profile = profile_name(t.profile);
      row.n = inst.n();
      row.m = inst.machines;
      row.epsilon = t.epsilon;
      row.delta = t.delta;
      int opt = 0;
      bool exact = false;
      if (const auto r = opt_throughput(inst)) {
        opt = r->value;
        exact = true;
      } else {
        opt = opt_upper_bound(inst);
      }
      const BoundReport rep = check_bounds(inst, vp, res.log, res.trace, opt);
      row.admitted = rep.admitted;
      row.on_time = rep.on_time;
      row.opt = opt;
      row.opt_exact = exact;
      row.ratio = rep.ratio;
      row.bound_factor = rep.factor;
      if (rep.opt_within_bound && rep.completion_ok) {
        row.pass = 1;
      } else {
        row.pass = exact ? 0 : -1;  // an upper bound above the bound is inconclusive
      }
      rows[idx] = std::move(row);
    }
  };
  const unsigned workers = std::min<unsigned>(thread_cap(), static_cast<unsigned>(tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  fs::create_directories(o.outdir);
  std::ostringstream lcsv;
  lcsv << "seed,profile,n,m,epsilon,delta,algorithm,model,admitted,on_time,opt,opt_exact,"
          "ratio,bound_factor,pass\n";
  for (const BenchRow& r : rows) {
    lcsv << r.seed << "," << r.profile << "," << r.n << "," << r.m << "," << to_frac(r.epsilon)
         << "," << (r.delta ? to_frac(*r.delta) : "") << "," << o.alg << "," << o.model << ","
         << r.admitted << "," << r.on_time << "," << r.opt << "," << (r.opt_exact ? 1 : 0) << ","
         << (r.ratio ? fmt_double(to_double(*r.ratio)) : "") << ","
         << fmt_double(to_double(r.bound_factor)) << ","
         << (r.pass < 0 ? std::string("") : std::to_string(r.pass)) << "\n";
  }
  write_file(fs::path(o.outdir) / "long.csv", lcsv.str());

  // Aggregate per grid point: mean and max of OPT/|F|.
  std::ostringstream acsv;
  acsv << "algorithm,epsilon,delta,eps_value,count,mean_ratio,max_ratio,bound_factor\n";
  for (const Rat& eps : grid) {
    for (const auto& frac : fracs) {
      std::optional<Rat> delta;
      if (frac) delta = *frac * eps;
      Rat sum = 0;
      std::optional<Rat> worst;
      int count = 0;
      Rat factor = 0;
      for (const BenchRow& r : rows) {
        if (r.epsilon != eps || r.delta != delta) continue;
        factor = r.bound_factor;
        if (!r.ratio) continue;
        sum += *r.ratio;
        if (!worst || *r.ratio > *worst) worst = *r.ratio;
        ++count;
      }
      acsv << o.alg << "," << to_frac(eps) << "," << (delta ? to_frac(*delta) : "") << ","
           << fmt_double(to_double(eps)) << "," << count << ","
           << (count ? fmt_double(to_double(sum / count)) : "") << ","
           << (worst ? fmt_double(to_double(*worst)) : "") << ","
           << fmt_double(to_double(factor)) << "\n";
    }
  }
  write_file(fs::path(o.outdir) / "aggregate.csv", acsv.str());

  std::ostringstream gp;
  gp << "# gnuplot script for the benchmark sweep\n"
     << "set datafile separator ','\n"
     << "set key left top\n"
     << "set xlabel 'epsilon'\n"
     << "set ylabel 'OPT / on-time'\n"
     << "set logscale y\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output 'ratio.png'\n"
     << "plot 'aggregate.csv' using 4:6 skip 1 with linespoints title 'mean ratio', \\\n"
     << "     'aggregate.csv' using 4:7 skip 1 with linespoints title 'max ratio', \\\n"
     << "     'aggregate.csv' using 4:8 skip 1 with lines title 'proved bound'\n";
  write_file(fs::path(o.outdir) / "plot.gp", gp.str());

  std::cout << "wrote " << tasks.size() << " rows to " << o.outdir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online deadline-throughput scheduling testbed"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* g = app.add_subcommand("gen", "generate a random instance file");
  g->add_option("--n", gen.n, "number of jobs")->check(CLI::PositiveNumber);
  g->add_option("--m", gen.m, "number of machines")->check(CLI::PositiveNumber);
  g->add_option("--epsilon", gen.epsilon, "slack parameter, rational p/q");
  g->add_option("--profile", gen.profile, "uniform|bursty|nested|tight-slack");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("-o,--output", gen.output, "output instance path")->required();

  RunOpts run;
  auto* r = app.add_subcommand("run", "simulate one algorithm on an instance");
  r->add_option("--alg", run.alg, "blocking|region")->required();
  r->add_option("--model", run.model, "none|admission|delta");
  r->add_option("--delta", run.delta, "delta for the delta-commitment model");
  r->add_option("--epsilon", run.epsilon, "override the instance slack");
  r->add_option("-i,--instance", run.instance, "instance path")->required();
  r->add_option("-o,--out", run.outdir, "output directory")->required();

  OracleOpts orc;
  auto* c = app.add_subcommand("oracle", "exact offline optimum (or an upper bound)");
  c->add_option("-i,--instance", orc.instance, "instance path")->required();
  c->add_option("-o,--output", orc.output, "result path (stdout when absent)");
  c->add_option("--max-jobs", orc.max_jobs, "exact-search job cap");
  c->add_option("--max-machines", orc.max_machines, "exact-search machine cap");

  VerifyOpts ver;
  auto* v = app.add_subcommand("verify", "run all invariant checks on one instance");
  v->add_option("--alg", ver.alg, "blocking|region")->required();
  v->add_option("--model", ver.model, "none|admission|delta");
  v->add_option("--delta", ver.delta, "delta for the delta-commitment model");
  v->add_option("-i,--instance", ver.instance, "instance path")->required();
  v->add_option("-o,--report", ver.report, "write a JSON report here");
  v->add_option("--max-jobs", ver.max_jobs, "oracle job cap");
  v->add_option("--max-machines", ver.max_machines, "oracle machine cap");

  BenchOpts ben;
  auto* b = app.add_subcommand("bench", "seeded sweep over an epsilon grid");
  b->add_option("--alg", ben.alg, "blocking|region")->required();
  b->add_option("--model", ben.model, "none|admission|delta");
  b->add_option("--epsilon-grid", ben.epsilon_grid, "comma-separated rationals");
  b->add_option("--delta-frac", ben.delta_fracs, "delta as fractions of epsilon");
  b->add_option("--per-point", ben.per_point, "instances per grid point")
      ->check(CLI::PositiveNumber);
  b->add_option("--seed", ben.seed, "base seed");
  b->add_option("--n", ben.n, "jobs per instance")->check(CLI::PositiveNumber);
  b->add_option("--m", ben.m, "machines per instance")->check(CLI::PositiveNumber);
  b->add_option("-o,--out", ben.outdir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (r->parsed()) return cmd_run(run);
    if (c->parsed()) return cmd_oracle(orc);
    if (v->parsed()) return cmd_verify(ver);
    if (b->parsed()) return cmd_bench(ben);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
