// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "hybridlab/archcount.hpp"
#include "hybridlab/constructions.hpp"
#include "hybridlab/formula.hpp"
#include "hybridlab/gdn.hpp"
#include "hybridlab/quantmodel.hpp"
#include "hybridlab/scalefit.hpp"
#include "hybridlab/taskgen.hpp"

namespace py = pybind11;
using namespace hybridlab;

namespace {

std::vector<gdn::GdnHeadIO> build_sequence(const Eigen::MatrixXd& Q,
                                           const Eigen::MatrixXd& K,
                                           const Eigen::MatrixXd& V,
                                           const Eigen::VectorXd& alpha,
                                           const Eigen::VectorXd& beta) {
  const auto len = Q.rows();
  if (K.rows() != len || V.rows() != len || alpha.size() != len || beta.size() != len)
    throw std::invalid_argument("all inputs must share the sequence length");
  std::vector<gdn::GdnHeadIO> seq;
  seq.reserve(len);
  for (Eigen::Index t = 0; t < len; ++t)
    seq.emplace_back(Q.row(t), K.row(t), V.row(t), alpha(t), beta(t));
  return seq;
}

Eigen::MatrixXd stack_outputs(const std::vector<Eigen::VectorXd>& ys) {
  if (ys.empty()) return {};
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ys.size()), ys.front().size());
  for (std::size_t t = 0; t < ys.size(); ++t) out.row(static_cast<Eigen::Index>(t)) = ys[t];
  return out;
}

taskgen::RenderOptions render_options(const std::string& spacing, int fixed_k,
                                      double strict_fraction) {
  taskgen::RenderOptions opts;
  opts.strict_fraction = strict_fraction;
  if (spacing == "none") {
    opts.spacing = taskgen::RenderOptions::Spacing::none;
  } else if (spacing == "fixed") {
    opts.spacing = taskgen::RenderOptions::Spacing::fixed;
    opts.fixed_k = fixed_k;
  } else if (spacing == "pow2") {
    opts.spacing = taskgen::RenderOptions::Spacing::randomized_pow2;
  } else {
    throw std::invalid_argument("spacing must be one of none|fixed|pow2");
  }
  return opts;
}

archcount::ArchSpec make_arch_spec(int d, int h, int l,
                                   const std::vector<std::string>& schedule,
                                   std::int64_t vocab, std::int64_t seq_len,
                                   int chunk_len, std::optional<int> h_gdn_override) {
  archcount::ArchSpec spec;
  spec.d = d;
  spec.h = h;
  spec.l = l;
  spec.V = vocab;
  spec.seq_len = seq_len;
  spec.chunk_len = chunk_len;
  spec.h_gdn_override = h_gdn_override;
  for (const auto& name : schedule)
    spec.schedule.push_back(archcount::layer_kind_from_string(name));
  return spec;
}

py::dict params_dict(const scalefit::ScalingLawParams& p) {
  py::dict out;
  out["E"] = p.E;
  out["A"] = p.A;
  out["alpha"] = p.alpha;
  out["B"] = p.B;
  out["beta"] = p.beta;
  out["a_opt"] = p.a_opt();
  out["b_opt"] = p.b_opt();
  return out;
}

scalefit::ScalingLawParams params_from_dict(const py::dict& d) {
  scalefit::ScalingLawParams p;
  p.E = d["E"].cast<double>();
  p.A = d["A"].cast<double>();
  p.alpha = d["alpha"].cast<double>();
  p.B = d["B"].cast<double>();
  p.beta = d["beta"].cast<double>();
  return p;
}

std::vector<scalefit::ScalingPoint> points_from_matrix(const Eigen::MatrixXd& m) {
  if (m.cols() != 3) throw std::invalid_argument("points must be an (n, 3) array of N, D, loss");
  std::vector<scalefit::ScalingPoint> points;
  points.reserve(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) points.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return points;
}

}  // namespace

PYBIND11_MODULE(_hybridlab, m) {
  m.doc() = "Exact GDN kernels, constructive hybrid solvers, quantization-model "
            "curves, scaling-law fitting, and architecture calculators";

  // ---- gdn ----------------------------------------------------------------
  m.def("transition_matrix", &gdn::transition_matrix, py::arg("k"), py::arg("beta"),
        py::arg("alpha"), py::arg("neg") = true,
        "alpha (I - c beta k k^T) with c = 2 when neg else 1");
  m.def(
      "gdn_scan",
      [](const Eigen::MatrixXd& Q, const Eigen::MatrixXd& K, const Eigen::MatrixXd& V,
         const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, bool neg) {
        return stack_outputs(gdn::gdn_scan(build_sequence(Q, K, V, alpha, beta),
                                           {64, neg}));
      },
      py::arg("q"), py::arg("k"), py::arg("v"), py::arg("alpha"), py::arg("beta"),
      py::arg("neg") = true, "Sequential scan; rows are tokens");
  m.def(
      "gdn_chunkwise",
      [](const Eigen::MatrixXd& Q, const Eigen::MatrixXd& K, const Eigen::MatrixXd& V,
         const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, int chunk_len,
         bool neg) {
        return stack_outputs(gdn::gdn_chunkwise(build_sequence(Q, K, V, alpha, beta),
                                                {chunk_len, neg}));
      },
      py::arg("q"), py::arg("k"), py::arg("v"), py::arg("alpha"), py::arg("beta"),
      py::arg("chunk_len") = 64, py::arg("neg") = true,
      "Chunkwise-parallel evaluation, equivalent to gdn_scan within 1e-9");

  // ---- constructions ------------------------------------------------------
  m.def(
      "compose_permutations",
      [](const std::vector<std::pair<int, int>>& swaps) {
        return constructions::compose_permutations_gdn(swaps).mapping;
      },
      py::arg("transpositions"),
      "Composes transpositions through the GDN kernel; returns the slot contents");
  m.def("parity", &constructions::parity_gdn, py::arg("bits"),
        "XOR computed by swap dynamics");
  m.def(
      "solve_state_based_recall",
      [](const taskgen::TaskInstance& inst, const std::string& order,
         const std::string& encoding) {
        const auto layer_order = order == "gdn_first"
                                     ? constructions::LayerOrder::gdn_first
                                     : constructions::LayerOrder::attn_first;
        if (order != "gdn_first" && order != "attn_first")
          throw std::invalid_argument("order must be gdn_first or attn_first");
        const auto enc = encoding == "unary" ? constructions::PointerEncoding::unary
                                             : constructions::PointerEncoding::binary;
        if (encoding != "unary" && encoding != "binary")
          throw std::invalid_argument("encoding must be unary or binary");
        return constructions::solve_state_based_recall(inst, layer_order, enc);
      },
      py::arg("instance"), py::arg("order") = "gdn_first",
      py::arg("encoding") = "unary");

  // ---- formula ------------------------------------------------------------
  m.def(
      "eval_formula",
      [](const std::string& text, int max_depth) {
        const auto ast = formula::parse_polish(text);
        const auto program = formula::barrington_compile(ast, max_depth);
        return py::make_tuple(formula::eval_via_gdn(program),
                              program.instructions.size());
      },
      py::arg("text"), py::arg("max_depth") = 14,
      "Parses, compiles to a width-5 program, evaluates via GDN; returns "
      "(value, program_length)");
  m.def(
      "eval_formula_reference",
      [](const std::string& text) { return formula::eval_ast(formula::parse_polish(text)); },
      py::arg("text"), "Plain recursive evaluation, the reference oracle");

  // ---- taskgen ------------------------------------------------------------
  py::class_<taskgen::TaskInstance>(m, "TaskInstance")
      .def_readonly("n", &taskgen::TaskInstance::n)
      .def_readonly("m", &taskgen::TaskInstance::m)
      .def_readonly("bits", &taskgen::TaskInstance::bits)
      .def_readonly("pointers", &taskgen::TaskInstance::pointers)
      .def_readonly("swaps", &taskgen::TaskInstance::swaps)
      .def_readonly("query_var", &taskgen::TaskInstance::query_var)
      .def_readonly("seed", &taskgen::TaskInstance::seed)
      .def_readonly("answer", &taskgen::TaskInstance::answer)
      .def_property_readonly(
          "kind", [](const taskgen::TaskInstance& t) { return taskgen::to_string(t.kind); })
      .def("__repr__", [](const taskgen::TaskInstance& t) {
        return "<TaskInstance " + taskgen::to_string(t.kind) + " n=" +
               std::to_string(t.n) + " m=" + std::to_string(t.m) + ">";
      });
  m.def(
      "gen_task",
      [](const std::string& kind, int n, int m, std::uint64_t seed) {
        return taskgen::gen_task(taskgen::task_kind_from_string(kind), n, m, seed);
      },
      py::arg("kind"), py::arg("n"), py::arg("m"), py::arg("seed") = 0);
  m.def("oracle_answer", &taskgen::oracle_answer, py::arg("instance"));
  m.def(
      "render_text",
      [](const taskgen::TaskInstance& inst, const std::string& spacing, int fixed_k,
         double strict_fraction) {
        return taskgen::render_text(inst, render_options(spacing, fixed_k, strict_fraction));
      },
      py::arg("instance"), py::arg("spacing") = "none", py::arg("fixed_k") = 0,
      py::arg("strict_fraction") = 0.2);
  m.def("parse_text", &taskgen::parse_text, py::arg("text"));

  // ---- quantmodel ---------------------------------------------------------
  py::class_<quant::QuantConfig>(m, "QuantConfig")
      .def(py::init<double, double, double, double, double, double, double, double,
                    double>(),
           py::arg("alpha"), py::arg("L0"), py::arg("delta"), py::arg("delta_p"),
           py::arg("eps"), py::arg("C") = 1.0, py::arg("C_p") = 1.0,
           py::arg("T") = 1.0, py::arg("T_p") = 1.0)
      .def_readonly("alpha", &quant::QuantConfig::alpha)
      .def_readonly("eps", &quant::QuantConfig::eps);
  m.def("zipf_prob", &quant::zipf_prob, py::arg("k"), py::arg("alpha"));
  m.def("irreducible_loss", &quant::irreducible_loss, py::arg("cfg"));
  m.def("loss_closed_tasks", &quant::loss_closed_tasks, py::arg("n"), py::arg("cfg"));
  m.def("loss_closed_params", &quant::loss_closed_params, py::arg("N"), py::arg("cfg"));
  m.def("loss_closed_tokens", &quant::loss_closed_tokens, py::arg("D"), py::arg("cfg"));
  m.def(
      "loss_exact",
      [](const std::string& axis, double x, const quant::QuantConfig& cfg) {
        return quant::loss_exact(quant::axis_from_string(axis), x, cfg);
      },
      py::arg("axis"), py::arg("x"), py::arg("cfg"));

  // ---- scalefit -----------------------------------------------------------
  m.def(
      "predict_loss",
      [](const py::dict& params, double n, double d) {
        return scalefit::predict_loss(params_from_dict(params), n, d);
      },
      py::arg("params"), py::arg("N"), py::arg("D"));
  m.def(
      "fit_scaling_law",
      [](const Eigen::MatrixXd& points, std::optional<std::pair<double, double>> fixed,
         double huber_delta, std::uint64_t seed) {
        scalefit::FitConfig cfg;
        cfg.fixed_exponents = fixed;
        cfg.huber_delta = huber_delta;
        cfg.seed = seed;
        const auto fit = scalefit::fit_scaling_law(points_from_matrix(points), cfg);
        py::dict out = params_dict(fit.params);
        out["r2"] = fit.r2;
        out["degenerate"] = fit.degenerate;
        return out;
      },
      py::arg("points"), py::arg("fixed_exponents") = std::nullopt,
      py::arg("huber_delta") = 1e-3, py::arg("seed") = 0,
      "points: (n, 3) array with columns N, D, loss");
  m.def(
      "tokens_to_target",
      [](const py::dict& params, double n, double target) {
        return scalefit::tokens_to_target(params_from_dict(params), n, target);
      },
      py::arg("params"), py::arg("N"), py::arg("L_target"));
  m.def(
      "compute_optimal",
      [](const py::dict& params, double flops) {
        const auto opt = scalefit::compute_optimal(params_from_dict(params), flops);
        py::dict out;
        out["N"] = opt.N;
        out["D"] = opt.D;
        out["loss"] = opt.L;
        return out;
      },
      py::arg("params"), py::arg("C"));
  m.def(
      "savings_factor",
      [](const py::dict& ref, const py::dict& arch, const std::string& mode,
         double scale, double target) {
        scalefit::SavingsMode m2;
        if (mode == "tokens") {
          m2 = scalefit::SavingsMode::tokens;
        } else if (mode == "params") {
          m2 = scalefit::SavingsMode::params;
        } else if (mode == "compute") {
          m2 = scalefit::SavingsMode::compute;
        } else {
          throw std::invalid_argument("mode must be tokens|params|compute");
        }
        return scalefit::savings_factor(params_from_dict(ref), params_from_dict(arch),
                                        m2, scale, target);
      },
      py::arg("ref"), py::arg("arch"), py::arg("mode"), py::arg("scale"),
      py::arg("target"));

  // ---- archcount ----------------------------------------------------------
  m.def(
      "count_params",
      [](int d, int h, int l, const std::vector<std::string>& schedule,
         std::int64_t vocab, std::optional<int> h_gdn_override) {
        const auto spec = make_arch_spec(d, h, l, schedule, vocab, 4096, 256,
                                         h_gdn_override);
        const auto report = archcount::count_params(spec);
        py::dict out;
        out["total_params"] = report.total_params;
        out["non_embedding_params"] = report.non_embedding_params;
        std::vector<std::int64_t> per_layer;
        for (const auto& layer : report.per_layer) per_layer.push_back(layer.params);
        out["per_layer"] = per_layer;
        return out;
      },
      py::arg("d"), py::arg("h"), py::arg("l"), py::arg("schedule"),
      py::arg("vocab") = 100352, py::arg("h_gdn_override") = std::nullopt);
  m.def(
      "flops_per_token",
      [](int d, int h, int l, const std::vector<std::string>& schedule,
         std::int64_t seq_len, int chunk_len, const std::string& mode,
         std::int64_t vocab) {
        const auto spec = make_arch_spec(d, h, l, schedule, vocab, seq_len, chunk_len,
                                         std::nullopt);
        const auto flop_mode = mode == "recurrent" ? archcount::FlopMode::recurrent
                                                   : archcount::FlopMode::chunkwise_train;
        if (mode != "recurrent" && mode != "chunkwise_train")
          throw std::invalid_argument("mode must be recurrent|chunkwise_train");
        return archcount::flops_per_token(spec, flop_mode);
      },
      py::arg("d"), py::arg("h"), py::arg("l"), py::arg("schedule"),
      py::arg("seq_len") = 4096, py::arg("chunk_len") = 256,
      py::arg("mode") = "chunkwise_train", py::arg("vocab") = 100352);
  m.def(
      "attention_state_size",
      [](std::int64_t seq, int kv_heads, int head_dim, int precision_bytes) {
        const auto s = archcount::attention_state_size(seq, kv_heads, head_dim,
                                                       precision_bytes);
        return py::make_tuple(s.elements, s.bytes);
      },
      py::arg("seq"), py::arg("kv_heads"), py::arg("head_dim"),
      py::arg("precision_bytes") = 2);
  m.def(
      "gdn_state_size",
      [](int heads, int d_k, int d_v, int precision_bytes) {
        const auto s = archcount::gdn_state_size(heads, d_k, d_v, precision_bytes);
        return py::make_tuple(s.elements, s.bytes);
      },
      py::arg("heads"), py::arg("d_k"), py::arg("d_v"), py::arg("precision_bytes") = 2);
}
