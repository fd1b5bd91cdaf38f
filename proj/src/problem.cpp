/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/problem.hpp"

#include "fsp/errors.hpp"
#include "fsp/stability.hpp"
#include "fsp/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace fsp {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional = {}) {
  if (!obj.is_object()) throw Error(ErrorCode::Schema, where + " must be an object");
  for (const auto& k : required) {
    if (!obj.contains(k)) throw Error(ErrorCode::Schema, where + " is missing key '" + k + "'");
  }
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                 std::find(optional.begin(), optional.end(), k) != optional.end();
    if (!known) throw Error(ErrorCode::Schema, where + " has unknown key '" + k + "'");
  }
}

Rational number_of(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return parse_rational(v.dump());
  throw Error(ErrorCode::Schema, where + " must be a decimal string or number");
}

std::vector<Rational> coeff_array(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw Error(ErrorCode::Schema, where + " must be a nonempty array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number_of(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void parse_options(const json& o, ProblemOptions& opts) {
  require_keys(o, "options", {},
               {"mult_degree", "bisect_tol", "grid_resolution", "direct", "tol_gap", "tol_feas",
                "rho"});
  if (o.contains("mult_degree")) opts.mult_degree = o["mult_degree"].get<int>();
  if (o.contains("bisect_tol")) opts.bisect_tol = o["bisect_tol"].get<double>();
  if (o.contains("grid_resolution")) opts.grid_resolution = o["grid_resolution"].get<int>();
  if (o.contains("direct")) opts.direct_mode = o["direct"].get<bool>();
  if (o.contains("tol_gap")) opts.tol_gap = o["tol_gap"].get<double>();
  if (o.contains("tol_feas")) opts.tol_feas = o["tol_feas"].get<double>();
  if (o.contains("rho")) {
    std::vector<double> rho;
    for (const auto& x : o["rho"]) rho.push_back(to_double(number_of(x, "options.rho")));
    opts.rho = rho;
  }
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("problem file is not valid JSON: ") + e.what());
  }
  require_keys(root, "problem", {"domain", "plant", "basis", "box"},
               {"options", "constraints"});
  if (root.contains("constraints")) {
    throw Error(ErrorCode::Unsupported,
                "'constraints' is reserved for general convex parameter sets and not implemented");
  }

  ProblemSpec spec;
  std::string dom = root["domain"].get<std::string>();
  if (dom == "ct") {
    spec.domain = Domain::CT;
  } else if (dom == "dt") {
    spec.domain = Domain::DT;
  } else {
    throw Error(ErrorCode::Schema, "domain must be 'ct' or 'dt'");
  }

  require_keys(root["plant"], "plant", {"num", "den"});
  spec.plant = make_transfer(spec.domain, coeff_array(root["plant"]["num"], "plant.num"),
                             coeff_array(root["plant"]["den"], "plant.den"));

  if (!root["basis"].is_array() || root["basis"].empty()) {
    throw Error(ErrorCode::Schema, "basis must be a nonempty array");
  }
  spec.basis.domain = spec.domain;
  for (std::size_t i = 0; i < root["basis"].size(); ++i) {
    const auto& e = root["basis"][i];
    std::string where = "basis[" + std::to_string(i) + "]";
    require_keys(e, where, {"num", "den"});
    spec.basis.entries.push_back(make_transfer(spec.domain, coeff_array(e["num"], where + ".num"),
                                               coeff_array(e["den"], where + ".den")));
  }

  require_keys(root["box"], "box", {"lower", "upper"});
  spec.box.lower = coeff_array(root["box"]["lower"], "box.lower");
  spec.box.upper = coeff_array(root["box"]["upper"], "box.upper");
  if (spec.box.lower.size() != spec.box.upper.size() ||
      spec.box.lower.size() != spec.basis.entries.size()) {
    throw Error(ErrorCode::Schema, "box arrays must match the basis length");
  }
  for (std::size_t i = 0; i < spec.box.dim(); ++i) {
    if (spec.box.lower[i] > spec.box.upper[i]) {
      throw Error(ErrorCode::Validation, "box lower bound exceeds upper bound");
    }
  }

  if (root.contains("options")) parse_options(root["options"], spec.options);
  return spec;
}

ProblemSpec parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open problem file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_problem_text(os.str());
}

void apply_overrides(ProblemSpec& spec, const std::string& overrides_json) {
  if (overrides_json.empty()) return;
  json o;
  try {
    o = json::parse(overrides_json);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("overrides are not valid JSON: ") + e.what());
  }
  if (o.contains("dump_dir")) {
    spec.options.dump_dir = o["dump_dir"].get<std::string>();
    o.erase("dump_dir");
  }
  parse_options(o, spec.options);
}

namespace {

std::string timestamp_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SynthOptions synth_options(const ProblemSpec& spec) {
  SynthOptions so;
  so.bisect_tol = spec.options.bisect_tol;
  so.solve.gap_tol = spec.options.tol_gap;
  so.solve.feas_tol = spec.options.tol_feas;
  so.solve.dump_dir = spec.options.dump_dir;
  return so;
}

BoxCertOptions box_options(const ProblemSpec& spec) {
  BoxCertOptions bo;
  bo.mult_degree = spec.options.mult_degree;
  bo.solve.gap_tol = spec.options.tol_gap;
  bo.solve.feas_tol = spec.options.tol_feas;
  bo.solve.dump_dir = spec.options.dump_dir;
  return bo;
}

json rho_json(const std::vector<double>& rho) {
  json a = json::array();
  for (double r : rho) a.push_back(r);
  return a;
}

struct Outcome {
  json report;
  int exit_code = 0;
  std::string summary;
};

Outcome cmd_stability(const ProblemSpec& spec) {
  ClosedLoop cl = compose_closed_loop(spec.plant, spec.basis);
  StabilityTable table = stability_table(cl);
  BoxCertResult res = certify_box_stability(table, spec.box, box_options(spec));
  Outcome out;
  if (res.certified) {
    out.report["status"] = "certified";
    out.report["theta_star"] = res.theta_star;
    out.exit_code = 0;
    std::ostringstream os;
    os << "Robust stability certified over the box (theta* = " << res.theta_star << ").";
    out.summary = os.str();
  } else if (res.counterexample) {
    out.report["status"] = "certified_negative";
    out.report["counterexample_rho"] = rho_json(*res.counterexample);
    out.exit_code = 2;
    out.summary = "Box is not stabilizing: destabilizing parameter value found.";
  } else {
    out.report["status"] = "inconclusive";
    out.report["theta_star"] = res.theta_star;
    out.exit_code = 2;
    out.summary = "No certificate at this multiplier degree and no counterexample found.";
  }
  double worst_res = 0;
  for (const auto& e : res.entries) worst_res = std::max(worst_res, e.certificate_residual);
  out.report["certificate_residual"] = worst_res;
  return out;
}

Outcome cmd_feasibility(const ProblemSpec& spec) {
  ClosedLoop cl = compose_closed_loop(spec.plant, spec.basis);
  PassivationProblem prob = make_problem(cl, spec.box);
  FeasibilityResult res = feasibility(prob, synth_options(spec));
  Outcome out;
  out.report["epsilon_star"] = res.epsilon_star;
  if (res.passivatable) {
    out.report["status"] = "feasible";
    out.report["rho_star"] = rho_json(res.rho_witness);
    out.exit_code = 0;
    std::ostringstream os;
    os << "Feedback passivation is feasible (epsilon* = " << res.epsilon_star << ").";
    out.summary = os.str();
  } else {
    out.report["status"] = "not_passivatable";
    out.exit_code = 2;
    out.summary = "No controller in the set passivates the plant (epsilon* <= 0).";
  }
  return out;
}

json verification_block(const ClosedLoop& cl, const StabilityTable& table,
                        const std::vector<double>& rho, IndexMode mode) {
  RationalTransfer g = closed_loop_at(cl, rho);
  json v;
  bool stable = transfer_stable(g) && stable_at(table, rho);
  v["stable_at_rho_star"] = stable;
  if (stable) {
    v["sweep_index"] = freq_index(g, mode);
    v["kyp_index"] = kyp_index(tf_to_ss(g), mode);
  }
  return v;
}

Outcome cmd_synthesize(const ProblemSpec& spec, IndexMode mode) {
  // Assumption on the plant: weak minimum phase + relative degree in {0,1}
  // for IFP, strict minimum phase for OFP (invertibility of the loop).
  ValidationReport vr = validate_plant(spec.plant, mode == IndexMode::OFP);
  if (!vr.ok) {
    std::string what = "plant assumption violated";
    for (const auto& m : vr.violations) what += "; " + m;
    throw Error(mode == IndexMode::OFP ? ErrorCode::NonMinimumPhase : ErrorCode::Validation, what);
  }

  ClosedLoop cl = compose_closed_loop(spec.plant, spec.basis);
  StabilityTable table = stability_table(cl);
  Outcome out;

  if (!spec.options.direct_mode) {
    BoxCertResult stab = certify_box_stability(table, spec.box, box_options(spec));
    if (!stab.certified) {
      out.report["status"] = stab.counterexample ? "certified_negative" : "inconclusive";
      if (stab.counterexample) out.report["counterexample_rho"] = rho_json(*stab.counterexample);
      out.exit_code = 2;
      out.summary = "Box-wide stability certification failed; synthesis not attempted "
                    "(use direct mode to synthesize anyway).";
      return out;
    }
    out.report["theta_star"] = stab.theta_star;
  }

  PassivationProblem prob = make_problem(cl, spec.box);
  SynthOptions so = synth_options(spec);
  SynthesisResult res = mode == IndexMode::IFP ? maximize_ifp(prob, so) : maximize_ofp(prob, so);
  out.report["epsilon_star"] = res.epsilon_star;
  if (!res.feasible) {
    out.report["status"] = "not_passivatable";
    out.exit_code = 2;
    out.summary = "The synthesis SDP is infeasible over the box.";
    return out;
  }

  out.report["rho_star"] = rho_json(res.rho_star);
  out.report["index"] = res.index_value;
  out.report["certificate_residual"] = res.certificate_residual;
  if (mode == IndexMode::IFP) {
    json trace = json::array();
    for (const auto& s : res.trace) trace.push_back({{"gamma", s.gamma}, {"feasible", s.feasible}});
    out.report["bisection_trace"] = trace;
    if (res.hit_gamma_cap) out.report["gamma_cap_hit"] = true;
  }

  json ver = verification_block(cl, table, res.rho_star, mode);
  out.report["verification"] = ver;
  bool stable = ver["stable_at_rho_star"].get<bool>();
  if (!stable) {
    out.report["status"] = "certified_negative";
    out.exit_code = 2;
    out.summary = "Synthesized controller does not stabilize the loop at rho*.";
    return out;
  }
  double sweep = ver["sweep_index"].get<double>();
  if (std::abs(sweep - res.index_value) > 5e-3) {
    out.report["status"] = "verification_failed";
    out.exit_code = 1;
    out.summary = "Optimum failed the independent frequency-sweep cross-check.";
    return out;
  }
  out.report["status"] = "optimal";
  out.exit_code = 0;
  std::ostringstream os;
  os << (mode == IndexMode::IFP ? "nu*" : "xi*") << " = " << res.index_value << " at rho* = (";
  for (std::size_t i = 0; i < res.rho_star.size(); ++i) {
    os << (i ? ", " : "") << res.rho_star[i];
  }
  os << ").";
  out.summary = os.str();
  return out;
}

Outcome cmd_verify(const ProblemSpec& spec) {
  if (!spec.options.rho) {
    throw Error(ErrorCode::Precondition, "verify requires a parameter value (--rho)");
  }
  const std::vector<double>& rho = *spec.options.rho;
  if (rho.size() != spec.box.dim()) {
    throw Error(ErrorCode::Precondition, "rho dimension does not match the basis");
  }
  ClosedLoop cl = compose_closed_loop(spec.plant, spec.basis);
  StabilityTable table = stability_table(cl);
  RationalTransfer g = closed_loop_at(cl, rho);

  Outcome out;
  json v;
  bool stable = transfer_stable(g);
  v["stable_at_rho_star"] = stable && stable_at(table, rho);
  if (stable) {
    v["sweep_index"] = freq_index(g, IndexMode::IFP);
    if (transfer_minimum_phase(g)) {
      v["sweep_index_ofp"] = freq_index(g, IndexMode::OFP);
    }
    StateSpace ss = tf_to_ss(g);
    v["kyp_index"] = kyp_index(ss, IndexMode::IFP);
    PositiveRealReport pr = positive_real_check(g);
    v["positive_real"] = pr.positive_real;
  }
  out.report["verification"] = v;
  out.report["rho_star"] = rho_json(rho);
  out.report["status"] = stable ? "verified" : "unstable";
  out.exit_code = stable ? 0 : 2;
  out.summary = stable ? "Closed loop is stable; indices reported." : "Closed loop is unstable.";
  return out;
}

}  // namespace

RunResult run_command(const std::string& command, const ProblemSpec& spec) {
  RunResult rr;
  Outcome out;
  try {
    if (command == "stability") {
      out = cmd_stability(spec);
    } else if (command == "feasibility") {
      out = cmd_feasibility(spec);
    } else if (command == "max-ifp") {
      out = cmd_synthesize(spec, IndexMode::IFP);
    } else if (command == "max-ofp") {
      out = cmd_synthesize(spec, IndexMode::OFP);
    } else if (command == "verify") {
      out = cmd_verify(spec);
    } else {
      throw Error(ErrorCode::Precondition, "unknown command '" + command + "'");
    }
  } catch (const Error& e) {
    out.report = json::object();
    out.report["status"] = "error";
    out.report["error_code"] = error_code_name(e.code());
    out.report["error"] = e.what();
    out.exit_code = 1;
    out.summary = std::string("Error: ") + e.what();
  }
  out.report["report_version"] = 1;
  out.report["command"] = command;
  out.report["timestamp"] = timestamp_now();
  rr.exit_code = out.exit_code;
  rr.report_json = out.report.dump(2);
  rr.summary = out.summary;
  return rr;
}

}  // namespace fsp
