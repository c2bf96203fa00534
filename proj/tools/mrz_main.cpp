// mrz: command-line front end for the martingale potential toolkit.
//
// Subcommands: verify, fuzz, norms, counterexample. Every run derives all of
// its randomness from --seed and writes a manifest next to its outputs, so
// identical (command, seed, inputs) produce identical output bytes.
//
// Exit codes: 0 success, 1 usage, 2 mathematical-check failure, 3 I/O.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrz/counterexample.hpp"
#include "mrz/filtration.hpp"
#include "mrz/inequality.hpp"
#include "mrz/norm_search.hpp"
#include "mrz/parallel.hpp"
#include "mrz/random_tree.hpp"
#include "mrz/riesz.hpp"
#include "mrz/single_step.hpp"
#include "mrz/tree_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMathFailure = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("cannot write " + path.string());
}

class Run {
 public:
  Run(std::string command, const fs::path& out_dir)
      : command_(std::move(command)), out_dir_(out_dir), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir_.string());
  }

  void set_seed(std::uint64_t seed) { manifest_["seed"] = seed; }
  void set_param(const std::string& key, json value) { manifest_["params"][key] = std::move(value); }
  void add_input(const fs::path& p) { manifest_["inputs"].push_back(p.string()); }

  fs::path out_path(const std::string& name) const { return out_dir_ / name; }

  void emit(const std::string& name, const std::string& content) {
    write_file(out_path(name), content);
    manifest_["outputs"].push_back(out_path(name).string());
  }

  void finish() {
    manifest_["command"] = command_;
    manifest_["artifact_version"] = kVersion;
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    manifest_["wall_time_seconds"] =
        std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
    if (!manifest_.contains("inputs")) manifest_["inputs"] = json::array();
    if (!manifest_.contains("outputs")) manifest_["outputs"] = json::array();
    write_file(out_path("manifest.json"), manifest_.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path out_dir_;
  std::chrono::steady_clock::time_point start_;
  json manifest_ = json::object();
};

// -------------------------------------------------------------------------
// verify

struct CheckOutcome {
  std::string condition;
  double worst = 0.0;  // worst slack or gap, semantics per check
  bool pass = false;
};

json outcome_json(const CheckOutcome& c) {
  return json{{"condition", c.condition}, {"worst", c.worst}, {"pass", c.pass}};
}

int run_verify(const fs::path& tree_file, const fs::path& var_file, double alpha,
               const fs::path& out_dir) {
  Run run("verify", out_dir);
  run.add_input(tree_file);
  run.add_input(var_file);
  run.set_param("alpha", alpha);

  const mrz::FiltrationTree tree = mrz::tree_from_json(read_file(tree_file));
  const mrz::RandomVariable f = mrz::variable_from_json(read_file(var_file), tree);

  const int depth = tree.depth();
  const mrz::RandomVariable fN = mrz::lift(f, depth);

  // Deterministic second variable: the terminal values reversed.
  std::vector<double> rev(fN.values().begin(), fN.values().end());
  std::reverse(rev.begin(), rev.end());
  const mrz::RandomVariable g(tree, depth, std::move(rev));

  constexpr double kTol = 1e-10;
  const double pair_scale =
      std::max(1e-300, mrz::lp_norm(fN, 2.0) * mrz::lp_norm(g, 2.0));
  const double f_scale = std::max(1e-300, mrz::sup_norm(fN));
  std::vector<CheckOutcome> checks;

  {  // E_n E_k = E_min(n,k)
    double worst = 0.0;
    for (int n = 0; n <= depth; ++n) {
      for (int k = 0; k <= depth; ++k) {
        worst = std::max(worst,
                         mrz::max_abs_deviation(mrz::condition(mrz::condition(fN, k), n),
                                                mrz::condition(fN, std::min(n, k))) / f_scale);
      }
    }
    checks.push_back({"conditioning-semigroup", worst, worst <= kTol});
  }
  {  // self-adjointness of E_n and M_n
    double worst = 0.0;
    for (int n = 0; n <= depth; ++n) {
      worst = std::max(worst, std::abs(mrz::inner_product(mrz::condition(fN, n), g) -
                                       mrz::inner_product(fN, mrz::condition(g, n))) /
                                  pair_scale);
      worst = std::max(worst, std::abs(mrz::inner_product(mrz::multiply(fN, n, alpha), g) -
                                       mrz::inner_product(fN, mrz::multiply(g, n, alpha))) /
                                  pair_scale);
    }
    checks.push_back({"self-adjointness", worst, worst <= kTol});
  }
  {  // E_n M_k = M_k E_n for k <= n
    double worst = 0.0;
    for (int n = 0; n <= depth; ++n) {
      for (int k = 0; k <= n; ++k) {
        worst = std::max(
            worst, mrz::max_abs_deviation(mrz::condition(mrz::multiply(fN, k, alpha), n),
                                          mrz::multiply(mrz::condition(fN, n), k, alpha)) /
                       f_scale);
      }
    }
    checks.push_back({"conditioning-multiplier-commutation", worst, worst <= kTol});
  }
  {  // duality of the two potentials
    const double gap = mrz::duality_gap(fN, g, alpha, depth) / pair_scale;
    checks.push_back({"duality", gap, gap <= kTol});
  }
  {  // tower property of the generated martingale
    const double gap = mrz::tower_gap(mrz::martingale_from(fN));
    checks.push_back({"tower-property", gap, gap <= 1e-9});
  }
  if (depth >= 1 && alpha > 0.0 && alpha < 1.0) {
    const mrz::SingleStepData d = mrz::decompose(fN, alpha);
    const mrz::ConditionReport nonsing = mrz::check_nonsingularity(d);
    checks.push_back({nonsing.condition, nonsing.worst_slack, nonsing.passed()});
    const mrz::ConditionReport abound = mrz::check_A_bound(d);
    checks.push_back({abound.condition, abound.worst_slack, abound.passed()});
    const mrz::TailBoundReport tail = mrz::check_b_bound(d);
    checks.push_back({"conditional-tail-identity", tail.identity_gap, tail.identity_ok});
  }

  json report = json::array();
  bool all_pass = true;
  for (const CheckOutcome& c : checks) {
    report.push_back(outcome_json(c));
    all_pass = all_pass && c.pass;
  }
  run.emit("verify_report.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";

  if (!all_pass) {
    json offending = {{"tree", json::parse(mrz::tree_to_json(tree))},
                      {"variable", json::parse(mrz::variable_to_json(f))},
                      {"failed", json::array()}};
    for (const CheckOutcome& c : checks) {
      if (!c.pass) offending["failed"].push_back(outcome_json(c));
    }
    run.emit("offending.json", offending.dump(2) + "\n");
    run.finish();
    std::cerr << "mathematical check failed\n";
    return kExitMathFailure;
  }
  run.finish();
  return kExitOk;
}

// -------------------------------------------------------------------------
// fuzz

struct FuzzArgs {
  std::string kind;
  double p = 2.0;
  double mu = 1.0;
  long trials = 10000;
  std::uint64_t seed = 1;
  int depth = 6;
  int branch_max = 5;
  fs::path out_dir = ".";
};

json quantiles(std::vector<double> values) {
  if (values.empty()) return json::object();
  std::sort(values.begin(), values.end());
  const auto at = [&](double q) {
    const std::size_t idx =
        std::min(values.size() - 1, static_cast<std::size_t>(q * values.size()));
    return values[idx];
  };
  return json{{"p50", at(0.50)}, {"p90", at(0.90)}, {"p99", at(0.99)}, {"max", values.back()}};
}

int run_fuzz(const FuzzArgs& args) {
  Run run("fuzz", args.out_dir);
  run.set_seed(args.seed);
  run.set_param("kind", args.kind);
  run.set_param("p", args.p);
  run.set_param("mu", args.mu);
  run.set_param("trials", args.trials);
  run.set_param("depth", args.depth);
  run.set_param("branch_max", args.branch_max);

  std::ostringstream csv;
  json summary;
  summary["command"] = "fuzz";
  summary["kind"] = args.kind;
  summary["seed"] = args.seed;
  summary["trials"] = args.trials;
  long violations = 0;

  if (args.kind == "numineq") {
    csv << "seed,trial,s,p,mu,min_c\n";
    std::vector<double> values;
    values.reserve(args.trials);
    mrz::SearchConfig cfg;
    cfg.seed = args.seed;
    cfg.trials = args.trials;
    const mrz::MinConstantResult result = mrz::min_constant(
        args.p, args.mu, cfg, [&](long trial, std::size_t s, double min_c) {
          csv << args.seed << ',' << trial << ',' << s << ',' << format_double(args.p) << ','
              << format_double(args.mu) << ',' << format_double(min_c) << '\n';
          values.push_back(min_c);
        });
    violations = result.violations;
    summary["min_constant"] = result.min_c;
    summary["mean"] = result.mean_c;
    summary["worst_trial"] = result.worst_trial;
    summary["quantiles"] = quantiles(std::move(values));
  } else if (args.kind == "nonsing") {
    csv << "seed,trial,s,p,lhs,rhs,ratio\n";
    struct Row {
      std::size_t s;
      mrz::NonsingGap gap;
    };
    std::vector<Row> rows(args.trials);
    mrz::parallel_for(args.trials, 0, [&](long i) {
      mrz::SplitMix64 rng = mrz::SplitMix64::stream(args.seed, static_cast<std::uint64_t>(i));
      const mrz::InequalityInstance inst = mrz::random_instance(rng, args.p, args.mu);
      rows[i] = {inst.size(), mrz::nonsing_gap(inst.x_j, inst.p_j, args.p)};
    });
    double max_inverse = 0.0;
    std::vector<double> values;
    values.reserve(args.trials);
    for (long i = 0; i < args.trials; ++i) {
      const mrz::NonsingGap& g = rows[i].gap;
      if (g.lhs < 0.0) ++violations;
      if (g.lhs > 0.0) max_inverse = std::max(max_inverse, g.rhs / g.lhs);
      csv << args.seed << ',' << i << ',' << rows[i].s << ',' << format_double(args.p) << ','
          << format_double(g.lhs) << ',' << format_double(g.rhs) << ','
          << format_double(g.ratio) << '\n';
      values.push_back(g.ratio);
    }
    summary["max_rhs_over_lhs"] = max_inverse;
    summary["quantiles"] = quantiles(std::move(values));
  } else if (args.kind == "conditions") {
    csv << "seed,trial,s,p,alpha,nonsing_slack,abound_slack,tail_gap,violations\n";
    struct Row {
      std::size_t s = 0;
      double p = 0.0, alpha = 0.0;
      double nonsing_slack = 0.0, abound_slack = 0.0, tail_gap = 0.0;
      long violations = 0;
    };
    std::vector<Row> rows(args.trials);
    mrz::parallel_for(args.trials, 0, [&](long i) {
      mrz::SplitMix64 rng = mrz::SplitMix64::stream(args.seed, static_cast<std::uint64_t>(i));
      const int depth = 1 + static_cast<int>(rng.next_below(args.depth));
      const mrz::FiltrationTree tree = mrz::random_tree(rng, depth, args.branch_max);
      const mrz::RandomVariable f = mrz::random_variable(rng, tree, depth, 2.0);
      const double p = rng.next_uniform(1.05, 5.0);
      const double alpha = 1.0 - 1.0 / p;
      const mrz::SingleStepData d = mrz::decompose(f, alpha);
      const mrz::ConditionReport nonsing = mrz::check_nonsingularity(d);
      const mrz::ConditionReport abound = mrz::check_A_bound(d);
      const mrz::TailBoundReport tail = mrz::check_b_bound(d);
      rows[i] = {d.s,
                 p,
                 alpha,
                 nonsing.worst_slack,
                 abound.worst_slack,
                 tail.identity_gap,
                 static_cast<long>(nonsing.violations.size() + abound.violations.size() +
                                   (tail.identity_ok ? 0 : 1))};
    });
    for (long i = 0; i < args.trials; ++i) {
      const Row& r = rows[i];
      violations += r.violations;
      csv << args.seed << ',' << i << ',' << r.s << ',' << format_double(r.p) << ','
          << format_double(r.alpha) << ',' << format_double(r.nonsing_slack) << ','
          << format_double(r.abound_slack) << ',' << format_double(r.tail_gap) << ','
          << r.violations << '\n';
    }
  } else {
    std::cerr << "unknown fuzz kind: " << args.kind << "\n";
    return kExitUsage;
  }

  summary["violations"] = violations;
  if (args.trials == 0) summary["status"] = "no data";

  run.emit("fuzz_" + args.kind + ".csv", csv.str());
  run.emit("fuzz_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  run.finish();
  return violations == 0 ? kExitOk : kExitMathFailure;
}

// -------------------------------------------------------------------------
// norms

struct NormsArgs {
  std::string mode;
  std::optional<double> p, q, r;
  long trials = 1000;
  int climb = 20;
  std::uint64_t seed = 1;
  int min_depth = 1;
  int depth = 5;
  int branch_max = 4;
  fs::path out_dir = ".";
};

int run_norms(const NormsArgs& args) {
  mrz::NormMode mode;
  mrz::Params params;
  if (args.mode == "hls") {
    if (!args.p || !args.q) {
      std::cerr << "mode hls requires --p and --q\n";
      return kExitUsage;
    }
    if (!(*args.p > 1.0) || !(*args.q > *args.p)) {
      std::cerr << "invalid exponents: this regime requires 1 < p < q < inf\n";
      return kExitUsage;
    }
    mode = mrz::NormMode::lp_to_lq;
    params = mrz::Params::lp_to_lq(*args.p, *args.q);
  } else if (args.mode == "bmo") {
    if (!args.r || !(*args.r > 1.0)) {
      std::cerr << "mode bmo requires --r with 1 < r < inf\n";
      return kExitUsage;
    }
    mode = mrz::NormMode::lr_to_bmo;
    params = mrz::Params::lr_to_bmo(*args.r);
  } else if (args.mode == "conj" || args.mode == "chain-l1") {
    if (!args.p || !(*args.p > 1.0)) {
      std::cerr << "mode " << args.mode << " requires --p with 1 < p < inf\n";
      return kExitUsage;
    }
    mode = args.mode == "conj" ? mrz::NormMode::h1_to_lp : mrz::NormMode::chain_l1;
    params = mrz::Params::h1_to_lp(*args.p);
  } else {
    std::cerr << "unknown mode: " << args.mode << "\n";
    return kExitUsage;
  }

  Run run("norms", args.out_dir);
  run.set_seed(args.seed);
  run.set_param("mode", args.mode);
  if (args.p) run.set_param("p", *args.p);
  if (args.q) run.set_param("q", *args.q);
  if (args.r) run.set_param("r", *args.r);
  run.set_param("trials", args.trials);
  run.set_param("climb", args.climb);
  run.set_param("min_depth", args.min_depth);
  run.set_param("depth", args.depth);
  run.set_param("branch_max", args.branch_max);

  mrz::SearchConfig cfg;
  cfg.seed = args.seed;
  cfg.trials = args.trials;
  cfg.climb_steps = args.climb;
  cfg.min_depth = args.min_depth;
  cfg.max_depth = args.depth;
  cfg.max_branch = args.branch_max;

  const mrz::NormEstimate est = mrz::estimate_operator_norm(mode, params, cfg);

  std::ostringstream csv;
  csv << "trial,ratio,best\n";
  for (const mrz::NormTraceRow& row : est.trace) {
    csv << row.trial << ',' << format_double(row.ratio) << ',' << format_double(row.best)
        << '\n';
  }
  json summary = {{"command", "norms"},     {"mode", args.mode},
                  {"seed", args.seed},      {"estimate", est.estimate},
                  {"evaluations", est.evaluations}, {"best_trial", est.best_trial}};
  run.emit("norms_trace.csv", csv.str());
  run.emit("norms_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  run.finish();
  return kExitOk;
}

// -------------------------------------------------------------------------
// counterexample

int run_counterexample(double p, int n_max, const std::optional<fs::path>& chain_file,
                       const fs::path& out_dir) {
  if (!(p > 1.0)) {
    std::cerr << "--p must exceed 1\n";
    return kExitUsage;
  }
  Run run("counterexample", out_dir);
  run.set_param("p", p);
  run.set_param("n_max", n_max);

  mrz::ChainSpec spec;
  if (chain_file) {
    run.add_input(*chain_file);
    const json doc = json::parse(read_file(*chain_file));
    if (!doc.is_object() || !doc.contains("d") || !doc["d"].is_array()) {
      throw std::runtime_error("chain document must be {\"d\": [1.0, ...]}");
    }
    for (const json& v : doc["d"]) spec.d.push_back(v.get<double>());
  } else {
    spec = mrz::ChainSpec::dyadic(n_max);
  }

  const mrz::GrowthCurve curve = mrz::growth_curve(spec, p);

  std::ostringstream csv;
  csv << "N,norm_p_to_the_p,closed_form_value,K_threshold\n";
  for (const mrz::GrowthPoint& pt : curve.points) {
    csv << pt.n << ',' << format_double(pt.norm_p_pow) << ','
        << format_double(pt.closed_form_pow) << ',' << curve.k_threshold << '\n';
  }
  json summary = {{"command", "counterexample"},
                  {"p", p},
                  {"alpha", curve.alpha},
                  {"k_threshold", curve.k_threshold},
                  {"depth", spec.depth()},
                  {"final_value", curve.points.empty() ? 0.0 : curve.points.back().norm_p_pow}};
  run.emit("counterexample_curve.csv", csv.str());
  run.emit("counterexample_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  run.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"martingale Riesz potential toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run identity and condition checks on a fixture");
  std::string tree_file, var_file;
  double verify_alpha = 0.5;
  std::string verify_out = ".";
  verify->add_option("--tree", tree_file, "filtration tree JSON file")->required();
  verify->add_option("--var", var_file, "random variable JSON file")->required();
  verify->add_option("--alpha", verify_alpha, "multiplier exponent in [0, 1)");
  verify->add_option("--out", verify_out, "output directory");

  // fuzz
  auto* fuzz = app.add_subcommand("fuzz", "randomized condition and inequality sweeps");
  FuzzArgs fuzz_args;
  fuzz->add_option("--kind", fuzz_args.kind, "numineq | nonsing | conditions")->required();
  fuzz->add_option("--p", fuzz_args.p, "integrability exponent (> 1)");
  fuzz->add_option("--mu", fuzz_args.mu, "inequality weight (> 0)");
  fuzz->add_option("--trials", fuzz_args.trials, "number of trials");
  fuzz->add_option("--seed", fuzz_args.seed, "64-bit seed");
  fuzz->add_option("--depth", fuzz_args.depth, "maximum tree depth");
  fuzz->add_option("--branch-max", fuzz_args.branch_max, "maximum branching factor");
  std::string fuzz_out = ".";
  fuzz->add_option("--out", fuzz_out, "output directory");

  // norms
  auto* norms = app.add_subcommand("norms", "randomized operator-norm estimation");
  NormsArgs norms_args;
  norms->add_option("--mode", norms_args.mode, "hls | bmo | conj | chain-l1")->required();
  double np = 0, nq = 0, nr = 0;
  auto* opt_p = norms->add_option("--p", np, "source exponent");
  auto* opt_q = norms->add_option("--q", nq, "target exponent (mode hls)");
  auto* opt_r = norms->add_option("--r", nr, "source exponent (mode bmo)");
  norms->add_option("--trials", norms_args.trials, "number of restarts");
  norms->add_option("--climb", norms_args.climb, "hill-climbing steps per restart");
  norms->add_option("--seed", norms_args.seed, "64-bit seed");
  norms->add_option("--min-depth", norms_args.min_depth, "minimum tree depth");
  norms->add_option("--depth", norms_args.depth, "maximum tree depth");
  norms->add_option("--branch-max", norms_args.branch_max, "maximum branching factor");
  std::string norms_out = ".";
  norms->add_option("--out", norms_out, "output directory");

  // counterexample
  auto* cx = app.add_subcommand("counterexample", "growth curve of the chain construction");
  double cx_p = 2.0;
  int cx_nmax = 60;
  std::string cx_chain, cx_out = ".";
  cx->add_option("--p", cx_p, "integrability exponent (> 1)");
  cx->add_option("--n-max", cx_nmax, "chain depth for the default dyadic spec");
  cx->add_option("--chain", cx_chain, "chain spec JSON file {\"d\": [...]}");
  cx->add_option("--out", cx_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      return run_verify(tree_file, var_file, verify_alpha, verify_out);
    }
    if (fuzz->parsed()) {
      fuzz_args.out_dir = fuzz_out;
      if (!(fuzz_args.p > 1.0) || !(fuzz_args.mu > 0.0) || fuzz_args.trials < 0) {
        std::cerr << "fuzz requires p > 1, mu > 0 and trials >= 0\n";
        return kExitUsage;
      }
      return run_fuzz(fuzz_args);
    }
    if (norms->parsed()) {
      norms_args.out_dir = norms_out;
      if (opt_p->count()) norms_args.p = np;
      if (opt_q->count()) norms_args.q = nq;
      if (opt_r->count()) norms_args.r = nr;
      return run_norms(norms_args);
    }
    if (cx->parsed()) {
      std::optional<fs::path> chain;
      if (!cx_chain.empty()) chain = cx_chain;
      return run_counterexample(cx_p, cx_nmax, chain, cx_out);
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const mrz::InvariantError& e) {
    std::cerr << "invariant violated: " << e.invariant() << " (" << e.what() << ")\n";
    return kExitMathFailure;
  } catch (const json::exception& e) {
    std::cerr << "invalid input document: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
