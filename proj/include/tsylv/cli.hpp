#pragma once

// Command-line front end: `tsylv gen|transform|solve|verify`.
//
// Exit codes: 0 success, 1 verification failure, 2 hypothesis violation
// (reciprocal-free, rank, shape gate), 3 I/O or parse error.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsylv/error.hpp"
#include "tsylv/generate.hpp"
#include "tsylv/instance_io.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/solvers.hpp"
#include "tsylv/spectra.hpp"
#include "tsylv/transforms.hpp"

namespace tsylv::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kHypothesis = 2, kIoError = 3 };

struct RunConfig {
  std::string method = "auto";
  double tol = 1e-8;
  double consistency_tol = 1e-10;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::string out;
  std::string instance_path;
  bool solvable = false;
  std::optional<double> near_reciprocal;
  std::size_t count = 10;
  std::size_t refine = 1;
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool json = false;
  bool verbose = false;
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline Json to_json(const DenseMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (double x : m.row(i)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(ComplexScalar z) {
  if (z.imag() == 0.0) return z.real();
  return Json::array({z.real(), z.imag()});
}

inline std::string render_value(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_exact(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += render_value(v[i]);
    }
    return s + "]";
  }
  return v.dump();
}

/// One "key: value" line per field, in insertion order.
inline void render_text(std::ostream& os, const Json& obj) {
  for (const auto& [key, value] : obj.items()) os << key << ": " << render_value(value) << '\n';
}

inline void emit(std::ostream& os, const Json& doc, bool json) {
  if (json) {
    os << doc.dump(2) << '\n';
    return;
  }
  if (doc.contains("routes")) {
    bool first = true;
    for (const auto& route : doc["routes"]) {
      if (!first) os << '\n';
      first = false;
      render_text(os, route);
    }
    return;
  }
  render_text(os, doc);
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotReciprocalFree:
    case ErrorKind::RankDeficient:
    case ErrorKind::ShapeError:
    case ErrorKind::SingularA:
    case ErrorKind::InconsistentS:
    case ErrorKind::BadLeftInverse:
    case ErrorKind::GenerationFailure:
      return kHypothesis;
    case ErrorKind::ParseError:
      return kIoError;
    default:
      return kVerifyFailed;
  }
}

inline Json error_report(const Error& e) {
  Json doc;
  doc["error"] = to_string(e.kind());
  doc["message"] = e.what();
  if (const auto* nrf = dynamic_cast<const NotReciprocalFreeError*>(&e)) {
    const auto& w = nrf->witness();
    doc["witness_pair"] = Json::array({w.i, w.j});
    doc["witness_lambda_i"] = to_json(w.lambda_i);
    doc["witness_lambda_j"] = to_json(w.lambda_j);
    doc["margin"] = nrf->margin();
  }
  if (e.kind() == ErrorKind::ShapeError) doc["usage"] = "method not applicable to this shape";
  return doc;
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {"direct", "over",      "under",
                                                 "oozawa", "cor-under", "auto"};
  return names;
}

/// Routes for `auto`: over when m > n, under when m < n, both Lyapunov
/// routes when m = n.
inline std::vector<std::string> auto_routes(std::size_t m, std::size_t n) {
  if (m > n) return {"over"};
  if (m < n) return {"under"};
  return {"oozawa", "cor-under"};
}

inline EquivalentForm build_form(const std::string& route, const ProblemInstance& inst,
                                 const TransformOptions& opts) {
  if (route == "over") return transform_over(inst, opts);
  if (route == "under") return transform_under(inst, opts);
  if (route == "oozawa") return transform_square_oozawa(inst, opts);
  if (route == "cor-under") return transform_square_under(inst, opts);
  throw Error(ErrorKind::ShapeError, "route '" + route + "' has no transformed form");
}

inline const char* equation_text(FormKind k) {
  switch (k) {
    case FormKind::GenSylvOver: return "A X - B^T X S^T = C - (S C)^T";
    case FormKind::GenSylvUnder: return "A X~ - B^T X~ S^T = C, X = X~ - D X~^T B";
    case FormKind::LyapOozawa: return "X~ - S X~ S^T = C - (S C)^T, X~ = A X";
    case FormKind::LyapUnder: return "X^ - S X^ S^T = C, X^ = A X~, X = X~ - A^-1 X~^T B";
  }
  return "";
}

inline ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return read_instance(in);
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::ParseError, "write failed for " + path);
}

inline TransformOptions transform_options(const RunConfig& cfg) {
  TransformOptions opts;
  opts.consistency_tol = cfg.consistency_tol;
  return opts;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  GenOptions opts;
  opts.m = cfg.m;
  opts.n = cfg.n;
  opts.solvable = cfg.solvable;
  opts.near_reciprocal = cfg.near_reciprocal;
  Rng rng(cfg.seed);
  const GeneratedInstance g = generate_instance(opts, rng);

  std::ostringstream file;
  file << "# tsylv instance m=" << cfg.m << " n=" << cfg.n << " seed=" << cfg.seed
       << " solvable=" << (cfg.solvable ? 1 : 0);
  if (cfg.near_reciprocal) file << " near-reciprocal=" << format_exact(*cfg.near_reciprocal);
  file << '\n';
  write_instance(file, g.instance);

  if (cfg.out.empty()) {
    out << file.str();
    return kOk;
  }
  write_file(cfg.out, file.str());
  Json doc;
  doc["wrote"] = cfg.out;
  doc["m"] = cfg.m;
  doc["n"] = cfg.n;
  doc["seed"] = cfg.seed;
  doc["attempts"] = g.attempts;
  doc["margin"] = g.margin;
  emit(out, doc, cfg.json);
  return kOk;
}

inline Json form_report(const std::string& route, const EquivalentForm& form) {
  Json doc;
  doc["route"] = route;
  doc["kind"] = to_string(form.kind);
  doc["equation"] = equation_text(form.kind);
  doc["m"] = form.source.m();
  doc["n"] = form.source.n();
  doc["S"] = to_json(form.s_matrix);
  if (form.kind == FormKind::GenSylvUnder) doc["D"] = to_json(form.recovery.d);
  doc["rhs"] = to_json(form.rhs);
  doc["recovery"] = to_string(form.recovery.kind);
  doc["reciprocal_free"] = true;
  doc["margin"] = form.margin;
  const GDiagnostic g = g_diagnostic(build_g_matrix(form));
  doc["g_dim"] = g.dim;
  doc["g_nonsingular"] = g.nonsingular;
  doc["g_min_pivot"] = g.min_pivot;
  return doc;
}

inline int cmd_transform(const RunConfig& cfg, std::ostream& out) {
  const ProblemInstance inst = load_instance(cfg.instance_path);
  const auto opts = transform_options(cfg);
  if (cfg.method == "direct") {
    const VecSystem sys = assemble_vec_system(inst);
    Json doc;
    doc["route"] = "direct";
    doc["m"] = inst.m();
    doc["n"] = inst.n();
    doc["system_rows"] = sys.matrix.rows();
    doc["system_cols"] = sys.matrix.cols();
    doc["system_rank"] = rank(sys.matrix);
    emit(out, doc, cfg.json);
    return kOk;
  }
  const std::vector<std::string> routes =
      cfg.method == "auto" ? auto_routes(inst.m(), inst.n()) : std::vector{cfg.method};
  Json doc;
  doc["routes"] = Json::array();
  for (const auto& route : routes) doc["routes"].push_back(form_report(route, build_form(route, inst, opts)));
  emit(out, doc, cfg.json);
  return kOk;
}

inline Json solve_report(const SolveReport& r, const ProblemInstance& inst, bool verbose) {
  Json doc;
  doc["method"] = to_string(r.method);
  doc["m"] = inst.m();
  doc["n"] = inst.n();
  doc["X"] = to_json(r.x);
  doc["residual"] = r.residual;
  doc["rank"] = r.system_rank;
  doc["unknowns"] = r.unknowns;
  doc["consistent"] = r.consistent;
  doc["tolerance"] = r.tolerance;
  if (r.margin) doc["margin"] = *r.margin;
  if (verbose) {
    if (r.transformed_solution) doc["transformed_solution"] = to_json(*r.transformed_solution);
    if (r.intermediate) doc["intermediate_x_tilde"] = to_json(*r.intermediate);
  }
  return doc;
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const ProblemInstance inst = load_instance(cfg.instance_path);
  SolveReport report;
  if (cfg.method == "direct") {
    report = solve_direct(inst, cfg.tol);
  } else {
    const std::string route =
        cfg.method == "auto" ? auto_routes(inst.m(), inst.n()).front() : cfg.method;
    report = solve_transformed(build_form(route, inst, transform_options(cfg)), cfg.tol, cfg.refine);
  }
  if (!cfg.out.empty()) {
    std::ostringstream file;
    write_matrix(file, "X", report.x);
    write_file(cfg.out, file.str());
  }
  emit(out, solve_report(report, inst, cfg.verbose), cfg.json);
  return kOk;
}

struct InstanceOutcome {
  std::vector<std::string> routes;
  std::vector<bool> passed;     // parallel to routes; index 0 is "direct"
  bool square_agreement = true;
  double worst_residual = 0.0;
  double worst_x_difference = 0.0;
  double margin = 0.0;
  std::string failure;
};

inline std::vector<std::string> verify_routes(std::size_t m, std::size_t n) {
  if (m > n) return {"direct", "over"};
  if (m < n) return {"direct", "under"};
  return {"direct", "over", "under", "oozawa", "cor-under"};
}

inline InstanceOutcome verify_one(const RunConfig& cfg, std::size_t index) {
  InstanceOutcome o;
  o.routes = verify_routes(cfg.m, cfg.n);
  o.passed.assign(o.routes.size(), false);
  GenOptions gen;
  gen.m = cfg.m;
  gen.n = cfg.n;
  gen.solvable = true;
  gen.min_margin = 1e-3;
  Rng rng(mix_seed(cfg.seed, index));
  const GeneratedInstance g = generate_instance(gen, rng);
  const ProblemInstance& inst = g.instance;
  o.margin = g.margin;

  const SolveReport direct = solve_direct(inst, cfg.tol);
  o.passed[0] = direct.consistent;
  o.worst_residual = direct.residual;
  std::vector<std::optional<SolveReport>> reports(o.routes.size());
  for (std::size_t k = 1; k < o.routes.size(); ++k) {
    try {
      reports[k] = solve_transformed(build_form(o.routes[k], inst, transform_options(cfg)), cfg.tol,
                                     cfg.refine);
    } catch (const Error& e) {
      if (o.failure.empty()) o.failure = o.routes[k] + ": " + e.what();
      continue;
    }
    const Verdict v = compare_solutions(direct, *reports[k], inst, cfg.tol);
    o.passed[k] = v.equivalent;
    o.worst_residual = std::max(o.worst_residual, reports[k]->residual);
    o.worst_x_difference = std::max(o.worst_x_difference, v.x_difference);
  }
  if (cfg.m == cfg.n) {
    const auto& a = reports[3];
    const auto& b = reports[4];
    o.square_agreement = a && b &&
                         frobenius_norm(a->x - b->x) / std::max(1.0, frobenius_norm(a->x)) <= cfg.tol;
  }
  return o;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::optional<InstanceOutcome>> outcomes(cfg.count);
  std::vector<std::string> gen_errors(cfg.count);
  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::size_t>(workers, std::max<std::size_t>(cfg.count, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < cfg.count; i += workers) {
          try {
            outcomes[i] = verify_one(cfg, i);
          } catch (const std::exception& e) {
            gen_errors[i] = e.what();
          }
        }
      });
    }
  }

  // Aggregate by index so the report is independent of scheduling.
  const auto routes = verify_routes(cfg.m, cfg.n);
  std::vector<std::size_t> pass(routes.size(), 0);
  std::size_t agree = 0, all_pass = 0;
  double worst_residual = 0.0, worst_xdiff = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string first_failure;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    if (!outcomes[i]) {
      if (first_failure.empty()) first_failure = "instance " + std::to_string(i) + ": " + gen_errors[i];
      continue;
    }
    const auto& o = *outcomes[i];
    bool ok = o.square_agreement;
    for (std::size_t k = 0; k < routes.size(); ++k) {
      pass[k] += o.passed[k];
      ok = ok && o.passed[k];
    }
    agree += o.square_agreement;
    all_pass += ok;
    if (!ok && first_failure.empty()) {
      first_failure = "instance " + std::to_string(i) + (o.failure.empty() ? "" : ": " + o.failure);
    }
    worst_residual = std::max(worst_residual, o.worst_residual);
    worst_xdiff = std::max(worst_xdiff, o.worst_x_difference);
    min_margin = std::min(min_margin, o.margin);
  }

  const bool success = all_pass == cfg.count;
  Json doc;
  doc["regime"] = cfg.m > cfg.n ? "OVER" : (cfg.m < cfg.n ? "UNDER" : "SQUARE");
  doc["m"] = cfg.m;
  doc["n"] = cfg.n;
  doc["count"] = cfg.count;
  doc["seed"] = cfg.seed;
  doc["tol"] = cfg.tol;
  doc["refine"] = cfg.refine;
  for (std::size_t k = 0; k < routes.size(); ++k) {
    doc["pass_" + routes[k]] = std::to_string(pass[k]) + "/" + std::to_string(cfg.count);
  }
  if (cfg.m == cfg.n) {
    doc["square_routes_agree"] = std::to_string(agree) + "/" + std::to_string(cfg.count);
  }
  doc["passed"] = std::to_string(all_pass) + "/" + std::to_string(cfg.count);
  doc["worst_residual"] = worst_residual;
  doc["worst_x_difference"] = worst_xdiff;
  if (cfg.count) doc["min_margin"] = min_margin;
  if (!first_failure.empty()) doc["first_failure"] = first_failure;
  doc["status"] = success ? "PASS" : "FAIL";
  emit(out, doc, cfg.json);
  return success ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"T-congruence Sylvester equation toolkit: A X + X^T B = C", "tsylv"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::size_t> size;

  auto add_size = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--size", size, "Dimensions M N of A (M x N)")->expected(2);
    if (required) opt->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Residual tolerance relative to 1+|A|+|B|+|C|")
        ->check(CLI::PositiveNumber);
    sub->add_option("--consistency-tol", cfg.consistency_tol,
                    "Relative tolerance for B^T = S A and A D = I")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--json", cfg.json, "Emit one JSON document instead of key: value lines");
  };
  auto add_refine = [&](CLI::App* sub) {
    sub->add_option("--refine", cfg.refine,
                    "Refinement rounds through the transformed equation (0 = none)");
  };

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  add_size(gen, true);
  gen->add_option("--seed", cfg.seed, "RNG seed");
  gen->add_flag("--solvable", cfg.solvable, "Build C from a random X0 so an exact solution exists");
  gen->add_option("--near-reciprocal", cfg.near_reciprocal,
                  "Rescale B so an eigenvalue product of S is 1 + delta")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--out", cfg.out, "Output path (stdout when omitted)");
  gen->add_flag("--json", cfg.json, "JSON summary when --out is given");

  auto* transform = app.add_subcommand("transform", "Print the equivalent transformed equation");
  transform->add_option("instance", cfg.instance_path, "Instance file")->required();
  transform->add_option("--method", cfg.method, "direct|over|under|oozawa|cor-under|auto")
      ->check(CLI::IsMember(method_names()));
  add_common(transform);

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", cfg.instance_path, "Instance file")->required();
  solve->add_option("--method", cfg.method, "direct|over|under|oozawa|cor-under|auto")
      ->check(CLI::IsMember(method_names()));
  solve->add_option("--out", cfg.out, "Write X to this path");
  solve->add_flag("--verbose", cfg.verbose, "Also print the transformed unknown");
  add_refine(solve);
  add_common(solve);

  auto* verify = app.add_subcommand("verify", "Check every route against the oracle on random instances");
  add_size(verify, true);
  verify->add_option("--count", cfg.count, "Number of instances");
  verify->add_option("--seed", cfg.seed, "RNG seed");
  verify->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  add_refine(verify);
  add_common(verify);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("tsylv");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kIoError;
  }
  if (size.size() == 2) {
    cfg.m = size[0];
    cfg.n = size[1];
    if (cfg.m == 0 || cfg.n == 0) {
      err << "usage error: --size needs M, N >= 1\n";
      return kIoError;
    }
  }

  try {
    if (gen->parsed()) return cmd_gen(cfg, out);
    if (transform->parsed()) return cmd_transform(cfg, out);
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
  } catch (const Error& e) {
    emit(out, error_report(e), cfg.json);
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kOk;
}

}  // namespace tsylv::cli
