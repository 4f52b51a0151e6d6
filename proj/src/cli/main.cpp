// qbm: desk CLI for Box-Muller sample sets, resource tables, error sweeps,
// expectation estimators and the Riemann-bound suite. Every command writes
// its artifacts under --out and finishes with manifest.json.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qbm/bounds.hpp"
#include "qbm/boxmuller.hpp"
#include "qbm/error.hpp"
#include "qbm/estimators.hpp"
#include "qbm/io.hpp"
#include "qbm/metrics.hpp"
#include "qbm/payoff.hpp"
#include "qbm/resources.hpp"
#include "qbm/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kGridGuardrail = 13;

// Collects outputs and writes the manifest after everything else.
class Run {
 public:
  Run(std::string command, fs::path out) : command_(std::move(command)), out_(std::move(out)) {
    fs::create_directories(out_);
  }

  json& params() { return params_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = out_ / name;
    qbm::io::write_text(path, content);
    paths_.push_back(path.generic_string());
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish() {
    const json manifest = {{"command", command_},
                           {"params", params_},
                           {"seed", seed_},
                           {"tool_version", qbm::kToolVersion},
                           {"output_paths", paths_}};
    qbm::io::write_text(out_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path out_;
  json params_ = json::object();
  std::uint64_t seed_ = 0;
  std::vector<std::string> paths_;
};

template <typename F>
std::string to_text(F&& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

// --- samples -----------------------------------------------------------------

struct SamplesOpts {
  int grid_qubits = 5;
  int word_bits = 16;
  int int_bits = 4;
  int degree = 1;
  int pieces = 32;
  double u_min = 0.0;
  double u_max = 1.0;
  std::string convention = "midpoint";
  std::string mode = "exact";
  double rho = 0.0;
  std::string format = "csv";
  std::string out = "qbm_out";
  bool mini = false;
  bool allow_large = false;
  std::uint64_t seed = 0;
};

int cmd_samples(const SamplesOpts& o) {
  if (o.grid_qubits > kGridGuardrail && !o.allow_large) {
    throw qbm::Error(qbm::ErrorKind::InvalidArgument,
                     "--grid-qubits above " + std::to_string(kGridGuardrail) +
                         " needs --allow-large");
  }
  qbm::GridConfig grid;
  grid.grid_qubits = o.grid_qubits;
  grid.u_min = o.u_min;
  grid.u_max = o.u_max;
  grid.convention = qbm::convention_from_string(o.convention);
  grid.validate();

  Run run("samples", o.out);
  run.set_seed(o.seed);
  run.params() = {{"grid_qubits", o.grid_qubits}, {"u_min", o.u_min},
                  {"u_max", o.u_max},             {"convention", o.convention},
                  {"mode", o.mode},               {"rho", o.rho},
                  {"format", o.format},           {"mini_approx", o.mini}};

  qbm::BoxMullerSampleSet samples;
  if (o.mode == "exact") {
    samples = qbm::generate_samples(grid);
  } else if (o.mode == "fixedpoint") {
    const qbm::FixedPointFormat fmt(o.word_bits, o.int_bits);
    const auto pipeline = o.mini ? qbm::FixedPointPipeline::mini(fmt)
                                 : qbm::FixedPointPipeline::standard(fmt, o.pieces, o.degree);
    run.params().update({{"word_bits", o.word_bits},
                         {"int_bits", o.int_bits},
                         {"degree", o.degree},
                         {"pieces", o.pieces}});
    samples = qbm::generate_samples(grid, pipeline);
  } else {
    throw qbm::Error(qbm::ErrorKind::InvalidArgument, "unknown --mode '" + o.mode + "'");
  }
  if (o.rho != 0.0) samples = qbm::correlate(samples, o.rho);

  if (o.format == "csv") {
    run.write("samples.csv", to_text([&](std::ostream& os) { qbm::write_samples_csv(os, samples); }));
  } else if (o.format == "json") {
    run.write("samples.json", qbm::samples_to_json(samples).dump() + "\n");
  } else {
    throw qbm::Error(qbm::ErrorKind::InvalidArgument, "unknown --format '" + o.format + "'");
  }

  const qbm::MetricReport report = qbm::report(samples);
  run.write_json("metrics.json", json(report));
  run.write("qq.csv", to_text([&](std::ostream& os) { qbm::write_qq_csv(os, report.qq); }));
  run.write("histogram.csv",
            to_text([&](std::ostream& os) { qbm::write_histogram_csv(os, report.histogram); }));
  run.finish();
  std::cout << json(report).dump(2) << "\n";
  return 0;
}

// --- resources ---------------------------------------------------------------

struct ResourcesOpts {
  std::string mode = "paper_fit";
  std::string format = "csv";
  bool serial = false;
  std::string out = "qbm_out";
};

int cmd_resources(const ResourcesOpts& o) {
  const qbm::ResourceMode mode = qbm::resource_mode_from_string(o.mode);
  const auto rows = qbm::table2(mode, o.serial);
  Run run("resources table2", o.out);
  run.params() = {{"mode", o.mode}, {"format", o.format}, {"serial", o.serial}};
  std::string text;
  if (o.format == "csv") {
    text = to_text([&](std::ostream& os) { qbm::write_table2_csv(os, rows); });
    run.write("table2.csv", text);
  } else if (o.format == "json") {
    text = qbm::table2_to_json(rows).dump(2) + "\n";
    run.write("table2.json", text);
  } else {
    throw qbm::Error(qbm::ErrorKind::InvalidArgument, "unknown --format '" + o.format + "'");
  }
  run.finish();
  std::cout << text;
  return 0;
}

// --- sweep -------------------------------------------------------------------

struct SweepOpts {
  int n_min = 10;
  int n_max = 19;
  int int_bits = 4;
  std::vector<int> degrees{1, 2, 3, 4};
  std::vector<int> pieces{2, 4, 8, 16, 32, 64};
  int grid_cap = qbm::kSweepGridCap;
  bool allow_large = false;
  std::string out = "qbm_out";
  std::uint64_t seed = 0;
};

int cmd_sweep(const SweepOpts& o) {
  if (o.n_min > o.n_max) throw qbm::Error(qbm::ErrorKind::InvalidArgument, "--n-min > --n-max");
  if ((o.n_max > 19 || o.grid_cap > qbm::kSweepGridCap) && !o.allow_large) {
    throw qbm::Error(qbm::ErrorKind::InvalidArgument,
                     "n above 19 or --grid-cap above 10 needs --allow-large");
  }
  std::vector<int> ns;
  for (int n = o.n_min; n <= o.n_max; ++n) ns.push_back(n);
  const auto points = qbm::sweep(ns, o.int_bits, o.degrees, o.pieces, o.grid_cap);

  Run run("sweep", o.out);
  run.set_seed(o.seed);
  run.params() = {{"n_min", o.n_min},     {"n_max", o.n_max},   {"int_bits", o.int_bits},
                  {"degrees", o.degrees}, {"pieces", o.pieces}, {"grid_cap", o.grid_cap}};
  run.write("sweep.csv", to_text([&](std::ostream& os) { qbm::write_sweep_csv(os, points); }));
  run.finish();
  std::cout << points.size() << " sweep points written to " << (fs::path(o.out) / "sweep.csv").string()
            << "\n";
  return 0;
}

// --- estimate ----------------------------------------------------------------

struct EstimateOpts {
  std::string algorithm = "bounded";
  std::string payoff = "gaussian-bell";
  double param = std::nan("");
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;
  int grid_qubits = 10;
  double B = 1.0;
  double D = 2.0;
  double D_tilde = 2.0;
  double sigma = 1.0;
  int max_grid_qubits = 10;
  std::string convention = "midpoint";
  std::string umax_form = "exp";
  std::string out = "qbm_out";
};

int cmd_estimate(const EstimateOpts& o) {
  const qbm::Payoff payoff = qbm::builtin_payoff(o.payoff, o.param);
  const auto convention = qbm::convention_from_string(o.convention);
  const auto form = qbm::umax_form_from_string(o.umax_form);
  if (o.max_grid_qubits > kGridGuardrail || o.grid_qubits > kGridGuardrail) {
    throw qbm::Error(qbm::ErrorKind::InvalidArgument,
                     "grid qubits above " + std::to_string(kGridGuardrail) + " are not supported");
  }

  json params = {{"algorithm", o.algorithm}, {"payoff", o.payoff},   {"epsilon", o.epsilon},
                 {"delta", o.delta},         {"convention", o.convention},
                 {"umax_form", o.umax_form}};
  if (!std::isnan(o.param)) params["param"] = o.param;

  qbm::EstimateResult result;
  if (o.algorithm == "bounded") {
    qbm::Case1Config cfg = qbm::case1_recipe(o.epsilon, o.grid_qubits, o.delta);
    cfg.convention = convention;
    cfg.umax_form = form;
    params["grid_qubits"] = o.grid_qubits;
    result = qbm::algorithm1(payoff, cfg, o.seed);
  } else if (o.algorithm == "l2") {
    qbm::Case2Config cfg;
    cfg.B = o.B;
    cfg.epsilon = o.epsilon;
    cfg.delta = o.delta;
    cfg.D = o.D;
    cfg.D_tilde = o.D_tilde;
    cfg.max_grid_qubits = o.max_grid_qubits;
    cfg.convention = convention;
    cfg.umax_form = form;
    params.update({{"B", o.B}, {"D", o.D}, {"D_tilde", o.D_tilde},
                   {"max_grid_qubits", o.max_grid_qubits}});
    result = qbm::algorithm2(payoff, cfg, o.seed);
  } else if (o.algorithm == "variance") {
    qbm::Case3Config cfg;
    cfg.sigma = o.sigma;
    cfg.epsilon = o.epsilon;
    cfg.D = o.D;
    cfg.D_tilde = o.D_tilde;
    cfg.max_grid_qubits = o.max_grid_qubits;
    cfg.convention = convention;
    cfg.umax_form = form;
    params.update({{"sigma", o.sigma}, {"D", o.D}, {"D_tilde", o.D_tilde},
                   {"max_grid_qubits", o.max_grid_qubits}});
    result = qbm::algorithm3(payoff, cfg, o.seed);
  } else {
    throw qbm::Error(qbm::ErrorKind::InvalidArgument, "unknown --algorithm '" + o.algorithm + "'");
  }

  Run run("estimate", o.out);
  run.set_seed(o.seed);
  run.params() = params;
  const json out = {{"inputs", params}, {"result", result}};
  run.write_json("estimate.json", out);
  run.finish();
  std::cout << out.dump(2) << "\n";
  return 0;
}

// --- bounds ------------------------------------------------------------------

int cmd_bounds(const std::string& out) {
  const auto suite = qbm::builtin_riemann_suite();
  bool all_ok = true;
  const std::string text = to_text([&](std::ostream& os) {
    qbm::io::CsvWriter w(os);
    w.header({"name", "rule", "n", "sum", "integral", "error", "bound", "ok"});
    for (const auto& c : suite) {
      // Slack for the reference integral's own tolerance.
      const bool ok = c.result.error <= c.result.bound + 1e-12;
      all_ok = all_ok && ok;
      w.field(c.name).field(qbm::to_string(c.rule)).field(c.n);
      w.field(c.result.sum).field(c.result.integral).field(c.result.error).field(c.result.bound);
      w.field(ok ? "true" : "false");
      w.end_row();
    }
  });
  Run run("bounds", out);
  run.write("bounds.csv", text);
  run.finish();
  std::cout << suite.size() << " Riemann cases, " << (all_ok ? "all within bound" : "BOUND VIOLATED")
            << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Box-Muller desk toolkit"};
  app.set_version_flag("--version", std::string(qbm::kToolVersion));
  app.require_subcommand(1);

  SamplesOpts so;
  auto* samples = app.add_subcommand("samples", "Box-Muller images of the (u, v) grid");
  samples->add_option("--grid-qubits", so.grid_qubits, "m: 2^m points per axis")->capture_default_str()
      ->check(CLI::Range(1, 20));
  samples->add_option("--word-bits", so.word_bits, "n: fixed-point word size")->capture_default_str();
  samples->add_option("--int-bits", so.int_bits, "p: integer bits incl. sign")->capture_default_str();
  samples->add_option("--degree", so.degree, "d: polynomial degree per piece")->capture_default_str();
  samples->add_option("--pieces", so.pieces, "M: pieces per function")->capture_default_str();
  samples->add_option("--u-min", so.u_min)->capture_default_str();
  samples->add_option("--u-max", so.u_max)->capture_default_str();
  samples->add_option("--convention", so.convention)->capture_default_str()
      ->check(CLI::IsMember({"midpoint", "endpoint"}));
  samples->add_option("--mode", so.mode)->capture_default_str()
      ->check(CLI::IsMember({"exact", "fixedpoint"}));
  samples->add_option("--rho", so.rho, "correlation of the second coordinate")->capture_default_str()
      ->check(CLI::Range(-1.0, 1.0));
  samples->add_option("--format", so.format)->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  samples->add_option("--out", so.out, "output directory")->capture_default_str();
  samples->add_flag("--mini-approx", so.mini, "linear sin and radius approximations");
  samples->add_flag("--allow-large", so.allow_large, "lift the grid-qubits guardrail");
  samples->add_option("--seed", so.seed)->capture_default_str();

  ResourcesOpts ro;
  auto* resources = app.add_subcommand("resources", "Closed-form T-count, T-depth and qubits");
  resources->require_subcommand(1);
  auto* table2 = resources->add_subcommand("table2", "Rows n = 10..19 at p = 4, d = 1, M = 32");
  table2->add_option("--mode", ro.mode)->capture_default_str()
      ->check(CLI::IsMember({"paper_fit", "compositional"}));
  table2->add_option("--format", ro.format)->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  table2->add_flag("--serial", ro.serial, "sum depths across the whole pipeline");
  table2->add_option("--out", ro.out)->capture_default_str();

  SweepOpts wo;
  auto* sweep = app.add_subcommand("sweep", "Error metrics over (n, d, M)");
  sweep->add_option("--n-min", wo.n_min)->capture_default_str();
  sweep->add_option("--n-max", wo.n_max)->capture_default_str()->check(CLI::Range(5, 40));
  sweep->add_option("--int-bits", wo.int_bits)->capture_default_str();
  sweep->add_option("--degrees", wo.degrees)->delimiter(',')->capture_default_str();
  sweep->add_option("--pieces", wo.pieces)->delimiter(',')->capture_default_str();
  sweep->add_option("--grid-cap", wo.grid_cap, "upper limit on grid qubits")->capture_default_str();
  sweep->add_flag("--allow-large", wo.allow_large);
  sweep->add_option("--out", wo.out)->capture_default_str();
  sweep->add_option("--seed", wo.seed)->capture_default_str();

  EstimateOpts eo;
  auto* estimate = app.add_subcommand("estimate", "Expectation estimate with error budget");
  estimate->add_option("--algorithm", eo.algorithm)->capture_default_str()
      ->check(CLI::IsMember({"bounded", "l2", "variance"}));
  estimate->add_option("--payoff", eo.payoff)->capture_default_str()
      ->check(CLI::IsMember(qbm::builtin_payoff_names()));
  estimate->add_option("--param", eo.param, "payoff parameter (shifted-linear, constant)");
  estimate->add_option("--epsilon", eo.epsilon)->capture_default_str();
  estimate->add_option("--delta", eo.delta)->capture_default_str();
  estimate->add_option("--seed", eo.seed)->capture_default_str();
  estimate->add_option("--grid-qubits", eo.grid_qubits, "bounded: grid qubits")->capture_default_str();
  estimate->add_option("--B", eo.B, "l2: bound on E[theta^2]^(1/2)")->capture_default_str();
  estimate->add_option("--D", eo.D)->capture_default_str();
  estimate->add_option("--D-tilde", eo.D_tilde)->capture_default_str();
  estimate->add_option("--sigma", eo.sigma, "variance: standard-deviation bound")->capture_default_str();
  estimate->add_option("--max-grid-qubits", eo.max_grid_qubits)->capture_default_str();
  estimate->add_option("--convention", eo.convention)->capture_default_str()
      ->check(CLI::IsMember({"midpoint", "endpoint"}));
  estimate->add_option("--umax-form", eo.umax_form)->capture_default_str()
      ->check(CLI::IsMember({"exp", "exp-pi"}));
  estimate->add_option("--out", eo.out)->capture_default_str();

  std::string bounds_out = "qbm_out";
  auto* bounds = app.add_subcommand("bounds", "Riemann-sum lemmas on the built-in suite");
  bounds->add_option("--out", bounds_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*samples) return cmd_samples(so);
    if (*table2) return cmd_resources(ro);
    if (*sweep) return cmd_sweep(wo);
    if (*estimate) return cmd_estimate(eo);
    if (*bounds) return cmd_bounds(bounds_out);
  } catch (const qbm::Error& e) {
    std::cerr << "qbm: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "qbm: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
