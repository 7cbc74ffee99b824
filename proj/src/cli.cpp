// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hybridlab/archcount.hpp"
#include "hybridlab/constructions.hpp"
#include "hybridlab/formula.hpp"
#include "hybridlab/gdn.hpp"
#include "hybridlab/parallel.hpp"
#include "hybridlab/quantmodel.hpp"
#include "hybridlab/scalefit.hpp"
#include "hybridlab/taskgen.hpp"

namespace hybridlab::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// gdn-check

struct GdnCheckArgs {
  int d = 16;
  int len = 1024;
  int chunk = 64;
  int cases = 1;
  std::uint64_t seed = 0;
  bool pos_eigenvalues = false;
};

std::vector<gdn::GdnHeadIO> random_sequence(int d, int len, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> alpha_dist(0.8, 1.0);
  std::uniform_real_distribution<double> beta_dist(0.0, 1.0);
  std::vector<gdn::GdnHeadIO> seq;
  seq.reserve(len);
  for (int t = 0; t < len; ++t) {
    Eigen::VectorXd k(d), q(d), v(2 * d);
    for (int i = 0; i < d; ++i) k(i) = gauss(rng);
    k.normalize();
    for (int i = 0; i < d; ++i) q(i) = gauss(rng) / std::sqrt(double(d));
    for (int i = 0; i < 2 * d; ++i) v(i) = gauss(rng) / std::sqrt(double(2 * d));
    seq.emplace_back(q, k, v, alpha_dist(rng), beta_dist(rng));
  }
  return seq;
}

int run_gdn_check(const GdnCheckArgs& args, std::ostream& out) {
  std::mt19937_64 rng(args.seed);
  const gdn::ChunkConfig cfg{args.chunk, !args.pos_eigenvalues};
  double max_diff = 0.0;
  for (int c = 0; c < args.cases; ++c) {
    const auto seq = random_sequence(args.d, args.len, rng);
    const auto ys = gdn::gdn_scan(seq, cfg);
    const auto yc = gdn::gdn_chunkwise(seq, cfg);
    for (std::size_t t = 0; t < ys.size(); ++t)
      max_diff = std::max(max_diff, (ys[t] - yc[t]).cwiseAbs().maxCoeff());
  }
  json result = {
      {"seed", args.seed},       {"d", args.d},
      {"len", args.len},         {"chunk", args.chunk},
      {"cases", args.cases},     {"neg_eigenvalues", !args.pos_eigenvalues},
      {"max_abs_diff", max_diff}, {"pass", max_diff <= 1e-9},
  };
  out << result.dump() << "\n";
  return result["pass"].get<bool>() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// construct-eval

struct ConstructEvalArgs {
  std::string kind = "state_based_recall";
  int n = 16;
  int m = 16;
  int count = 100;
  std::uint64_t seed = 0;
  std::string order = "both";
};

int run_construct_eval(const ConstructEvalArgs& args, std::ostream& out) {
  const auto kind = taskgen::task_kind_from_string(args.kind);
  std::vector<std::string> orders;
  if (kind == taskgen::TaskKind::state_based_recall) {
    if (args.order == "both") {
      orders = {"gdn_first", "attn_first"};
    } else if (args.order == "gdn_first" || args.order == "attn_first") {
      orders = {args.order};
    } else {
      throw std::invalid_argument("construct-eval: unknown order '" + args.order + "'");
    }
  } else {
    orders = {"single"};
  }

  json results = json::array();
  for (const auto& order : orders) {
    std::vector<int> hits(args.count, 0);
    parallel_for(args.count, [&](std::size_t i) {
      const auto inst = taskgen::gen_task(kind, args.n, args.m, args.seed + i);
      int predicted = 0;
      switch (kind) {
        case taskgen::TaskKind::state_tracking:
          predicted = constructions::solve_state_tracking(inst);
          break;
        case taskgen::TaskKind::recall:
          predicted = constructions::solve_recall(inst);
          break;
        case taskgen::TaskKind::state_based_recall:
          predicted = constructions::solve_state_based_recall(
              inst, order == "gdn_first" ? constructions::LayerOrder::gdn_first
                                         : constructions::LayerOrder::attn_first);
          break;
      }
      hits[i] = predicted == taskgen::oracle_answer(inst) ? 1 : 0;
    });
    int correct = 0;
    for (int h : hits) correct += h;
    results.push_back({{"order", order},
                       {"correct", correct},
                       {"accuracy", double(correct) / args.count}});
  }
  json result = {{"kind", args.kind}, {"n", args.n},       {"m", args.m},
                 {"count", args.count}, {"seed", args.seed}, {"results", results}};
  out << result.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// formula

int run_formula(const std::string& input, int max_depth, std::ostream& out,
                std::istream& in_stream) {
  std::istream* in = &in_stream;
  std::ifstream file;
  if (!input.empty() && input != "-") {
    file.open(input);
    if (!file) throw std::runtime_error("formula: cannot open " + input);
    in = &file;
  }
  out << "index,value,program_length\n";
  std::string line;
  std::size_t index = 0;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    const auto ast = formula::parse_polish(line);
    const auto program = formula::barrington_compile(ast, max_depth);
    const int value = formula::eval_via_gdn(program);
    out << index++ << "," << value << "," << program.instructions.size() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gen-tasks

struct GenTasksArgs {
  std::string kind = "state_based_recall";
  int n = 8;
  int m = 8;
  int count = 1;
  std::uint64_t seed = 0;
  std::string spacing = "none";  // none | fixed:<k> | pow2
  double strict_fraction = 0.2;
};

taskgen::RenderOptions parse_render_options(const GenTasksArgs& args) {
  taskgen::RenderOptions opts;
  opts.strict_fraction = args.strict_fraction;
  if (args.spacing == "none") {
    opts.spacing = taskgen::RenderOptions::Spacing::none;
  } else if (args.spacing == "pow2") {
    opts.spacing = taskgen::RenderOptions::Spacing::randomized_pow2;
  } else if (args.spacing.rfind("fixed:", 0) == 0) {
    opts.spacing = taskgen::RenderOptions::Spacing::fixed;
    opts.fixed_k = std::stoi(args.spacing.substr(6));
  } else {
    throw std::invalid_argument("gen-tasks: unknown spacing '" + args.spacing + "'");
  }
  return opts;
}

int run_gen_tasks(const GenTasksArgs& args, std::ostream& out) {
  const auto kind = taskgen::task_kind_from_string(args.kind);
  const auto opts = parse_render_options(args);
  for (int i = 0; i < args.count; ++i) {
    const std::uint64_t seed = args.seed + i;
    const auto inst = taskgen::gen_task(kind, args.n, args.m, seed);
    json line = {{"kind", args.kind}, {"n", args.n},          {"m", args.m},
                 {"seed", seed},      {"text", taskgen::render_text(inst, opts)},
                 {"answer", inst.answer}};
    out << line.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// quantmodel

struct QuantArgs {
  std::string axis = "tokens";
  double alpha = 0.5, L0 = 3.0, delta = 1.0, delta_p = 1.0, eps = 0.2;
  double cost = 1.0, cost_p = 1.0, threshold = 1.0, threshold_p = 1.0;
  double grid_start = 1.0, grid_stop = 1e8;
  int grid_points = 50;
};

int run_quantmodel(const QuantArgs& args, std::ostream& out) {
  const quant::QuantConfig cfg(args.alpha, args.L0, args.delta, args.delta_p, args.eps,
                               args.cost, args.cost_p, args.threshold,
                               args.threshold_p);
  const auto axis = quant::axis_from_string(args.axis);
  if (!(args.grid_stop > args.grid_start) || args.grid_points < 2)
    throw std::invalid_argument("quantmodel: need grid_stop > grid_start, points >= 2");
  std::vector<double> grid;
  for (int i = 0; i < args.grid_points; ++i) {
    grid.push_back(args.grid_start *
                   std::pow(args.grid_stop / args.grid_start,
                            double(i) / (args.grid_points - 1)));
  }
  const auto curve = quant::evaluate_curve(axis, grid, cfg);
  out << "axis_value,exact,closed,eps\n";
  char buf[128];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", curve.grid[i],
                  curve.exact[i], curve.closed[i], cfg.eps);
    out << buf;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// fit-scaling / savings / compute-optimal

std::vector<scalefit::ScalingPoint> read_points_csv(const std::string& path,
                                                    std::istream& in_stream) {
  std::istream* in = &in_stream;
  std::ifstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw std::runtime_error("fit-scaling: cannot open " + path);
    in = &file;
  }
  std::string header;
  if (!std::getline(*in, header) || header.rfind("N,D,loss", 0) != 0)
    throw std::invalid_argument("fit-scaling: expected CSV header 'N,D,loss'");
  std::vector<scalefit::ScalingPoint> points;
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string n, d, l;
    if (!std::getline(row, n, ',') || !std::getline(row, d, ',') ||
        !std::getline(row, l, ','))
      throw std::invalid_argument("fit-scaling: malformed row: " + line);
    points.push_back({std::stod(n), std::stod(d), std::stod(l)});
  }
  return points;
}

json params_json(const scalefit::ScalingLawParams& p) {
  return {{"E", p.E},       {"A", p.A},           {"alpha", p.alpha},
          {"B", p.B},       {"beta", p.beta},     {"a_opt", p.a_opt()},
          {"b_opt", p.b_opt()}};
}

scalefit::ScalingLawParams params_from_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open params file " + path);
  json j = json::parse(file);
  scalefit::ScalingLawParams p;
  p.E = j.at("E").get<double>();
  p.A = j.at("A").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.B = j.at("B").get<double>();
  p.beta = j.at("beta").get<double>();
  return p;
}

struct FitArgs {
  std::string input;
  std::string fixed_exponents;  // "a,b" or empty
  int bootstrap = 1000;
  double huber_delta = 1e-3;
  double ci_level = 0.95;
  std::uint64_t seed = 0;
};

int run_fit_scaling(const FitArgs& args, std::ostream& out, std::istream& in) {
  const auto points = read_points_csv(args.input, in);
  scalefit::FitConfig cfg;
  cfg.huber_delta = args.huber_delta;
  cfg.bootstrap_n = args.bootstrap;
  cfg.ci_level = args.ci_level;
  cfg.seed = args.seed;
  if (!args.fixed_exponents.empty()) {
    const auto comma = args.fixed_exponents.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("fit-scaling: --fixed-exponents wants 'alpha,beta'");
    cfg.fixed_exponents = {std::stod(args.fixed_exponents.substr(0, comma)),
                           std::stod(args.fixed_exponents.substr(comma + 1))};
  }
  const auto boot = scalefit::bootstrap_ci(points, cfg);
  auto interval = [](const scalefit::Interval& iv) { return json{iv.lo, iv.hi}; };
  json result = {
      {"params", params_json(boot.fit.params)},
      {"ci",
       {{"E", interval(boot.E)},
        {"A", interval(boot.A)},
        {"alpha", interval(boot.alpha)},
        {"B", interval(boot.B)},
        {"beta", interval(boot.beta)}}},
      {"r2", boot.fit.r2},
      {"degenerate", boot.fit.degenerate},
      {"bootstrap_n", cfg.bootstrap_n},
      {"seed", args.seed},
  };
  out << result.dump() << "\n";
  return 0;
}

int run_savings(const std::string& ref_path, const std::string& arch_path,
                const std::string& mode_name, double scale, double target,
                std::ostream& out) {
  const auto ref = params_from_file(ref_path);
  const auto arch = params_from_file(arch_path);
  scalefit::SavingsMode mode;
  if (mode_name == "tokens") {
    mode = scalefit::SavingsMode::tokens;
  } else if (mode_name == "params") {
    mode = scalefit::SavingsMode::params;
  } else if (mode_name == "compute") {
    mode = scalefit::SavingsMode::compute;
  } else {
    throw std::invalid_argument("savings: unknown mode '" + mode_name + "'");
  }
  const double ratio = scalefit::savings_factor(ref, arch, mode, scale, target);
  json result = {{"mode", mode_name}, {"scale", scale}, {"target", target},
                 {"ratio", ratio}};
  out << result.dump() << "\n";
  return 0;
}

int run_compute_optimal(const std::string& params_path, double flops,
                        std::ostream& out) {
  const auto params = params_from_file(params_path);
  const auto opt = scalefit::compute_optimal(params, flops);
  json result = {{"flops", flops}, {"N", opt.N}, {"D", opt.D}, {"loss", opt.L}};
  out << result.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// count / state-size

archcount::ArchSpec spec_from_json(const json& j) {
  archcount::ArchSpec spec;
  spec.d = j.at("d").get<int>();
  spec.h = j.at("h").get<int>();
  spec.l = j.at("l").get<int>();
  if (j.contains("V")) spec.V = j.at("V").get<std::int64_t>();
  if (j.contains("seq_len")) spec.seq_len = j.at("seq_len").get<std::int64_t>();
  if (j.contains("chunk_len")) spec.chunk_len = j.at("chunk_len").get<int>();
  if (j.contains("h_gdn_override"))
    spec.h_gdn_override = j.at("h_gdn_override").get<int>();
  if (j.contains("mamba")) {
    const auto& m = j.at("mamba");
    if (m.contains("expand")) spec.mamba.expand = m.at("expand").get<int>();
    if (m.contains("state")) spec.mamba.state = m.at("state").get<int>();
    if (m.contains("groups")) spec.mamba.groups = m.at("groups").get<int>();
  }
  if (j.contains("schedule")) {
    for (const auto& name : j.at("schedule"))
      spec.schedule.push_back(
          archcount::layer_kind_from_string(name.get<std::string>()));
  } else if (j.contains("pattern")) {
    const auto& p = j.at("pattern");
    const std::string type = p.at("type").get<std::string>();
    const auto fill = archcount::layer_kind_from_string(
        p.contains("kind") ? p.at("kind").get<std::string>() : "gdn");
    const bool force_final = !p.contains("force_final_attention") ||
                             p.at("force_final_attention").get<bool>();
    if (type == "pure") {
      spec.schedule = archcount::ArchSpec::uniform(spec.l, fill);
    } else if (type == "interleaved") {
      spec.schedule = archcount::ArchSpec::interleaved(spec.l, p.at("ratio").get<int>(),
                                                       fill, force_final);
    } else if (type == "middle") {
      spec.schedule = archcount::ArchSpec::middle(spec.l, p.at("ratio").get<int>(),
                                                  fill, force_final);
    } else {
      throw std::invalid_argument("count: unknown pattern type '" + type + "'");
    }
  } else {
    throw std::invalid_argument("count: spec needs 'schedule' or 'pattern'");
  }
  return spec;
}

int run_count(const std::string& spec_path, double tokens, std::ostream& out) {
  std::ifstream file(spec_path);
  if (!file) throw std::runtime_error("count: cannot open " + spec_path);
  const auto spec = spec_from_json(json::parse(file));
  const auto report = archcount::count_params(spec);
  json per_layer = json::array();
  for (const auto& layer : report.per_layer)
    per_layer.push_back(
        {{"kind", archcount::to_string(layer.kind)}, {"params", layer.params}});
  json result = {
      {"total_params", report.total_params},
      {"non_embedding_params", report.non_embedding_params},
      {"per_layer", per_layer},
      {"flops_fwd_per_token",
       {{"recurrent", archcount::flops_per_token(spec, archcount::FlopMode::recurrent)},
        {"chunkwise_train",
         archcount::flops_per_token(spec, archcount::FlopMode::chunkwise_train)}}},
  };
  if (tokens > 0) {
    result["train_compute"] = {
        {"tokens", tokens},
        {"analytic",
         archcount::train_compute(spec, tokens, archcount::ComputeConvention::analytic)},
        {"heuristic_6nd", archcount::train_compute(
                              spec, tokens, archcount::ComputeConvention::heuristic_6nd)}};
  }
  out << result.dump() << "\n";
  return 0;
}

struct StateSizeArgs {
  std::string layer = "gdn";
  std::int64_t seq = 0;
  std::int64_t window = 0;
  int kv_heads = 0;
  int head_dim = 0;
  int heads = 0;
  int dk = 0;
  int dv = 0;
  int precision_bytes = 2;
};

int run_state_size(const StateSizeArgs& args, std::ostream& out) {
  archcount::StateSize size;
  if (args.layer == "gdn") {
    size = archcount::gdn_state_size(args.heads, args.dk, args.dv,
                                     args.precision_bytes);
  } else if (args.layer == "mha" || args.layer == "gqa") {
    size = archcount::attention_state_size(args.seq, args.kv_heads, args.head_dim,
                                           args.precision_bytes);
  } else if (args.layer == "swa") {
    size = archcount::attention_state_size(args.window, args.kv_heads, args.head_dim,
                                           args.precision_bytes);
  } else {
    throw std::invalid_argument("state-size: unknown layer '" + args.layer + "'");
  }
  json result = {{"layer", args.layer},
                 {"elements", size.elements},
                 {"bytes", size.bytes},
                 {"mib", size.mib()}};
  out << result.dump() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hybridlab: exact GDN kernels, constructive hybrid solvers, "
               "scaling-law tooling, and architecture calculators"};
  app.require_subcommand(1);

  GdnCheckArgs gdn_args;
  auto* gdn_cmd = app.add_subcommand(
      "gdn-check", "Compare sequential and chunkwise GDN on random sequences");
  gdn_cmd->add_option("--d", gdn_args.d, "Head dimension")->check(CLI::PositiveNumber);
  gdn_cmd->add_option("--len", gdn_args.len, "Sequence length")
      ->check(CLI::PositiveNumber);
  gdn_cmd->add_option("--chunk", gdn_args.chunk, "Chunk length")
      ->check(CLI::PositiveNumber);
  gdn_cmd->add_option("--cases", gdn_args.cases, "Number of random cases")
      ->check(CLI::PositiveNumber);
  gdn_cmd->add_option("--seed", gdn_args.seed, "RNG seed");
  gdn_cmd->add_flag("--pos-eigenvalues", gdn_args.pos_eigenvalues,
                    "Disable the negative-eigenvalue extension");

  ConstructEvalArgs ce_args;
  auto* ce_cmd = app.add_subcommand(
      "construct-eval", "Run the exact constructions against task oracles");
  ce_cmd->add_option("--kind", ce_args.kind,
                     "state_tracking | recall | state_based_recall");
  ce_cmd->add_option("--n", ce_args.n, "Update count");
  ce_cmd->add_option("--m", ce_args.m, "Bit-array size");
  ce_cmd->add_option("--count", ce_args.count, "Instances")->check(CLI::PositiveNumber);
  ce_cmd->add_option("--seed", ce_args.seed, "Base seed");
  ce_cmd->add_option("--order", ce_args.order, "gdn_first | attn_first | both");

  std::string formula_input;
  int formula_max_depth = 14;
  auto* formula_cmd = app.add_subcommand(
      "formula", "Compile Polish-notation formulas and evaluate them via GDN");
  formula_cmd->add_option("--input", formula_input, "Input file ('-' for stdin)");
  formula_cmd->add_option("--max-depth", formula_max_depth, "Compile depth limit");

  GenTasksArgs gt_args;
  auto* gt_cmd = app.add_subcommand("gen-tasks", "Emit task instances as JSON lines");
  gt_cmd->add_option("--kind", gt_args.kind,
                     "state_tracking | recall | state_based_recall");
  gt_cmd->add_option("--n", gt_args.n, "Update count");
  gt_cmd->add_option("--m", gt_args.m, "Bit-array size");
  gt_cmd->add_option("--count", gt_args.count, "Instances")->check(CLI::PositiveNumber);
  gt_cmd->add_option("--seed", gt_args.seed, "Base seed");
  gt_cmd->add_option("--spacing", gt_args.spacing, "none | fixed:<k> | pow2");
  gt_cmd->add_option("--strict-fraction", gt_args.strict_fraction,
                     "Fraction rendered without reveals");

  QuantArgs q_args;
  auto* q_cmd = app.add_subcommand(
      "quantmodel", "Exact and closed-form quantization-model loss curves (CSV)");
  q_cmd->add_option("--axis", q_args.axis, "tasks | params | tokens");
  q_cmd->add_option("--alpha", q_args.alpha, "Zipf exponent");
  q_cmd->add_option("--l0", q_args.L0, "Base loss");
  q_cmd->add_option("--delta", q_args.delta, "Loss reduction (expressible)");
  q_cmd->add_option("--delta-p", q_args.delta_p, "Loss reduction (inexpressible)");
  q_cmd->add_option("--eps", q_args.eps, "Inexpressibility probability");
  q_cmd->add_option("--cost", q_args.cost, "Parameter cost (expressible)");
  q_cmd->add_option("--cost-p", q_args.cost_p, "Parameter cost (inexpressible)");
  q_cmd->add_option("--threshold", q_args.threshold, "Sample threshold (expressible)");
  q_cmd->add_option("--threshold-p", q_args.threshold_p,
                    "Sample threshold (inexpressible)");
  q_cmd->add_option("--grid-start", q_args.grid_start, "First abscissa");
  q_cmd->add_option("--grid-stop", q_args.grid_stop, "Last abscissa");
  q_cmd->add_option("--grid-points", q_args.grid_points, "Grid size (log-spaced)");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand(
      "fit-scaling", "Fit L(N,D) = E + A/N^a + B/D^b to CSV data (header N,D,loss)");
  fit_cmd->add_option("--input", fit_args.input, "Input CSV ('-' for stdin)");
  fit_cmd->add_option("--fixed-exponents", fit_args.fixed_exponents,
                      "Pin exponents, e.g. 0.22,0.22");
  fit_cmd->add_option("--bootstrap", fit_args.bootstrap, "Bootstrap replicates");
  fit_cmd->add_option("--huber-delta", fit_args.huber_delta, "Huber delta on log loss");
  fit_cmd->add_option("--ci-level", fit_args.ci_level, "CI level");
  fit_cmd->add_option("--seed", fit_args.seed, "Bootstrap seed");

  std::string sav_ref, sav_arch, sav_mode = "tokens";
  double sav_scale = 7e9, sav_target = 2.474;
  auto* sav_cmd = app.add_subcommand(
      "savings", "Resource savings factor between two fitted laws");
  sav_cmd->add_option("--ref", sav_ref, "Reference params JSON")->required();
  sav_cmd->add_option("--arch", sav_arch, "Architecture params JSON")->required();
  sav_cmd->add_option("--mode", sav_mode, "tokens | params | compute");
  sav_cmd->add_option("--scale", sav_scale, "Fixed N (tokens) or D (params)");
  sav_cmd->add_option("--target", sav_target, "Target loss");

  std::string co_params;
  double co_flops = 1e22;
  auto* co_cmd = app.add_subcommand("compute-optimal",
                                    "Compute-optimal (N, D, loss) at a FLOP budget");
  co_cmd->add_option("--params", co_params, "Params JSON")->required();
  co_cmd->add_option("--flops", co_flops, "Compute budget");

  std::string count_spec;
  double count_tokens = 0;
  auto* count_cmd = app.add_subcommand(
      "count", "Parameter counts and FLOPs per token for an architecture spec");
  count_cmd->add_option("--spec", count_spec, "Arch-spec JSON file")->required();
  count_cmd->add_option("--tokens", count_tokens,
                        "Training tokens (adds train_compute to the report)");

  StateSizeArgs ss_args;
  auto* ss_cmd = app.add_subcommand("state-size", "Per-layer inference state size");
  ss_cmd->add_option("--layer", ss_args.layer, "mha | gqa | swa | gdn");
  ss_cmd->add_option("--seq", ss_args.seq, "Sequence length (mha/gqa)");
  ss_cmd->add_option("--window", ss_args.window, "Window (swa)");
  ss_cmd->add_option("--kv-heads", ss_args.kv_heads, "KV heads (attention)");
  ss_cmd->add_option("--head-dim", ss_args.head_dim, "Head dim (attention)");
  ss_cmd->add_option("--heads", ss_args.heads, "Heads (gdn)");
  ss_cmd->add_option("--dk", ss_args.dk, "Key head dim (gdn)");
  ss_cmd->add_option("--dv", ss_args.dv, "Value head dim (gdn)");
  ss_cmd->add_option("--precision-bytes", ss_args.precision_bytes, "Bytes per element");

  try {
    // CLI11's vector overload consumes arguments from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (gdn_cmd->parsed()) return run_gdn_check(gdn_args, out);
    if (ce_cmd->parsed()) return run_construct_eval(ce_args, out);
    if (formula_cmd->parsed())
      return run_formula(formula_input, formula_max_depth, out, std::cin);
    if (gt_cmd->parsed()) return run_gen_tasks(gt_args, out);
    if (q_cmd->parsed()) return run_quantmodel(q_args, out);
    if (fit_cmd->parsed()) return run_fit_scaling(fit_args, out, std::cin);
    if (sav_cmd->parsed())
      return run_savings(sav_ref, sav_arch, sav_mode, sav_scale, sav_target, out);
    if (co_cmd->parsed()) return run_compute_optimal(co_params, co_flops, out);
    if (count_cmd->parsed()) return run_count(count_spec, count_tokens, out);
    if (ss_cmd->parsed()) return run_state_size(ss_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand given\n";
  return 2;
}

}  // namespace hybridlab::cli
