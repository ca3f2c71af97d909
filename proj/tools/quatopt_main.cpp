// Batch front end: JSON problems in, JSON results out. Every command ends
// with an independent verification pass that recomputes the module
// invariants from the serialized outputs, never from solver internals.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quatopt/applications.hpp"
#include "quatopt/decomposition.hpp"
#include "quatopt/errors.hpp"
#include "quatopt/io.hpp"
#include "quatopt/spectral.hpp"

using nlohmann::json;
using namespace quatopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string input;
  std::string output;  // empty = stdout
  double tol = 1e-8;
  int max_iter = 200;
  std::uint64_t seed = 0;
  bool no_verify = false;
};

SdpOptions sdp_options(const Flags& f) {
  SdpOptions o;
  o.gap_tol = f.tol;
  o.feas_tol = f.tol;
  o.max_iter = f.max_iter;
  return o;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

json vector_to_json(const QuaternionVectord& v) {
  json a = json::array(), b = json::array(), c = json::array(), d = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v.a(i));
    b.push_back(v.b(i));
    c.push_back(v.c(i));
    d.push_back(v.d(i));
  }
  return json{{"a", a}, {"b", b}, {"c", c}, {"d", d}};
}

QuaternionVectord vector_from_json(const json& jv) {
  const auto read = [&](const char* comp) {
    Eigen::VectorXd out(jv.at(comp).size());
    for (std::size_t i = 0; i < jv.at(comp).size(); ++i) out(i) = jv.at(comp)[i].get<double>();
    return out;
  };
  return {read("a"), read("b"), read("c"), read("d")};
}

struct Residual {
  std::string name;
  double value;
  double tolerance;
};

json residuals_to_json(const std::vector<Residual>& rs, bool& all_pass) {
  json arr = json::array();
  all_pass = true;
  for (const auto& r : rs) {
    const bool pass = r.value <= r.tolerance;
    all_pass = all_pass && pass;
    arr.push_back(json{{"name", r.name},
                       {"value", r.value},
                       {"tolerance", r.tolerance},
                       {"pass", pass}});
  }
  return arr;
}

int emit(const Flags& flags, const std::string& command, const std::string& digest_str,
         const std::string& status, const json& outputs, const json& residuals, int exit_code) {
  json result;
  result["command"] = command;
  result["input"] = flags.input;
  result["input_digest"] = digest_str;
  result["flags"] = json{{"tol", flags.tol},
                         {"max_iter", flags.max_iter},
                         {"seed", flags.seed},
                         {"verify", !flags.no_verify}};
  result["timestamp"] = utc_timestamp();
  result["status"] = status;
  result["outputs"] = outputs;
  result["residuals"] = residuals;
  const std::string text = result.dump(2) + "\n";
  if (flags.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(flags.output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot open output file " << flags.output << "\n";
      return kExitInput;
    }
    out << text;
  }
  return exit_code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Hermitian constraint matrices named <prefix>1.. up to `limit`; stops at the
// first missing name.
std::vector<HermitianMatrixd> collect_indexed(const ProblemFile& p, const std::string& prefix,
                                              int limit) {
  std::vector<HermitianMatrixd> out;
  for (int k = 1; k <= limit; ++k) {
    const std::string name = prefix + std::to_string(k);
    if (p.matrices.find(name) == p.matrices.end()) break;
    out.push_back(require_hermitian(p, name));
  }
  return out;
}

// ---------------------------------------------------------------------------

int run_decompose(const Flags& flags, const ProblemFile& p, const std::string& digest_str) {
  const HermitianMatrixd x = require_hermitian(p, "X");
  const std::vector<HermitianMatrixd> a = collect_indexed(p, "A", 4);
  if (a.empty()) throw ParseError("decompose needs matrices A1..A4 (at least A1)");

  const RankOneDecomposition dec = decompose(x, a);

  json outputs;
  outputs["rank"] = dec.vectors.size();
  outputs["means"] = dec.means;
  json vecs = json::array();
  for (const auto& v : dec.vectors) vecs.push_back(vector_to_json(v));
  outputs["vectors"] = vecs;

  std::vector<Residual> rs;
  if (!flags.no_verify) {
    // verification from the serialized outputs only
    std::vector<QuaternionVectord> xs;
    for (const auto& jv : outputs["vectors"]) xs.push_back(vector_from_json(jv));
    const int r = static_cast<int>(xs.size());
    QuaternionMatrixd sum(x.n(), x.n());
    for (const auto& xi : xs) sum += outer(xi, xi);
    const double recon = frobenius_norm(x.matrix() - sum) / (1.0 + frobenius_norm(x.matrix()));
    rs.push_back({"reconstruction", recon, 1e-8});
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double target = inner_product(a[k].matrix(), x.matrix());
      double worst = 0.0;
      for (const auto& xi : xs) {
        worst = std::max(worst, std::abs(quad_form(a[k], xi) - target / r));
      }
      rs.push_back({"equal_inner_product_A" + std::to_string(k + 1),
                    worst / (1.0 + std::abs(target)), 1e-7});
    }
  }
  bool ok = true;
  const json jres = residuals_to_json(rs, ok);
  return emit(flags, "decompose", digest_str, ok ? "ok" : "verification-failure", outputs, jres,
              ok ? kExitOk : kExitVerification);
}

int run_jnr(const Flags& flags, const ProblemFile& p, const std::string& digest_str) {
  JnrQuery query;
  for (int k = 0; k < 5; ++k) {
    query.matrices[k] = require_hermitian(p, "A" + std::to_string(k + 1));
  }
  const auto vit = p.real_vectors.find("v");
  if (vit == p.real_vectors.end() || vit->second.size() != 5) {
    throw ParseError("jnr needs real_vectors.v with 5 entries");
  }
  std::copy(vit->second.begin(), vit->second.end(), query.target.begin());

  const JnrRecovery rec = jnr_recover(query, sdp_options(flags));

  json outputs;
  outputs["sdp_status"] = to_string(rec.point.sdp_status);
  outputs["feasible"] = rec.feasible;
  if (!rec.feasible) {
    outputs["constraint_residual"] = rec.point.constraint_residual;
    return emit(flags, "jnr", digest_str, "infeasible", outputs, json::array(),
                kExitVerification);
  }
  outputs["x"] = vector_to_json(rec.x);
  outputs["achieved"] = rec.achieved;

  std::vector<Residual> rs;
  if (!flags.no_verify) {
    const QuaternionVectord x = vector_from_json(outputs["x"]);
    for (int k = 0; k < 5; ++k) {
      const double got = quad_form(query.matrices[k], x);
      rs.push_back({"target_A" + std::to_string(k + 1),
                    std::abs(got - query.target[k]) / (1.0 + std::abs(query.target[k])), 1e-6});
    }
  }
  bool ok = true;
  const json jres = residuals_to_json(rs, ok);
  return emit(flags, "jnr", digest_str, ok ? "ok" : "verification-failure", outputs, jres,
              ok ? kExitOk : kExitVerification);
}

int run_sproc(const Flags& flags, const ProblemFile& p, const std::string& digest_str) {
  const HermitianMatrixd a0 = require_hermitian(p, "A0");
  std::array<HermitianMatrixd, 4> a;
  for (int k = 0; k < 4; ++k) a[k] = require_hermitian(p, "A" + std::to_string(k + 1));
  const auto x0it = p.vectors.find("x0");
  if (x0it == p.vectors.end()) throw ParseError("sproc needs vector x0");

  const SProcResult res = sproc_certificate(a0, a, x0it->second, flags.seed, sdp_options(flags));

  json outputs;
  outputs["sdp_status"] = to_string(res.sdp_status);
  outputs["sdp_optimum"] = res.sdp_optimum;
  std::vector<Residual> rs;
  std::string status = "ok";
  int code = kExitOk;

  if (res.status == SProcStatus::Certified) {
    outputs["result"] = "certified";
    outputs["taus"] = res.certificate->taus;
    outputs["min_eig"] = res.certificate->min_eig;
    if (!flags.no_verify) {
      // rebuild the slack matrix from the emitted multipliers
      std::array<double, 4> taus = outputs["taus"].get<std::array<double, 4>>();
      QuaternionMatrixd slack = a0.matrix();
      double min_tau = 0.0;
      for (int k = 0; k < 4; ++k) {
        slack -= taus[k] * a[k].matrix();
        min_tau = std::min(min_tau, taus[k]);
      }
      const EigenDecomposition eig = eig_hermitian(HermitianMatrixd(slack));
      const double min_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
      rs.push_back({"tau_nonnegative", -min_tau, 0.0});
      rs.push_back({"slack_min_eig",
                    std::max(0.0, -min_eig) / (1.0 + frobenius_norm(a0.matrix())), 1e-7});
    }
  } else if (res.status == SProcStatus::Refuted) {
    outputs["result"] = "refuted";
    outputs["witness"] = vector_to_json(*res.witness);
    outputs["witness_objective"] = res.witness_objective;
    if (!flags.no_verify) {
      const QuaternionVectord w = vector_from_json(outputs["witness"]);
      const double w2 = squared_norm(w);
      double min_g = 0.0;
      for (int k = 0; k < 4; ++k) {
        min_g = std::min(min_g, quad_form(a[k], w) /
                                    (1.0 + w2 * frobenius_norm(a[k].matrix())));
      }
      rs.push_back({"witness_forms_nonnegative", -min_g, 1e-9});
      rs.push_back({"witness_objective_negative", quad_form(a0, w), 0.0});
    }
  } else {
    outputs["result"] = "inconclusive";
    status = "inconclusive";
  }
  bool ok = true;
  const json jres = residuals_to_json(rs, ok);
  if (!ok) {
    status = "verification-failure";
    code = kExitVerification;
  }
  return emit(flags, "sproc", digest_str, status, outputs, jres, code);
}

int run_qcqp(const Flags& flags, const ProblemFile& p, const std::string& digest_str) {
  QcqpProblem prob;
  prob.q_matrix = require_hermitian(p, "Q");
  const Eigen::Index n = prob.q_matrix.n();
  prob.q_vector = p.vectors.count("q") ? p.vectors.at("q") : QuaternionVectord::Zero(n);
  for (int j = 1; j <= 4; ++j) {
    const std::string mn = "A" + std::to_string(j);
    if (p.matrices.find(mn) == p.matrices.end()) break;
    QcqpConstraint con;
    con.a = require_hermitian(p, mn);
    const std::string bn = "b" + std::to_string(j);
    con.b = p.vectors.count(bn) ? p.vectors.at(bn) : QuaternionVectord::Zero(n);
    const std::string cn = "c" + std::to_string(j);
    con.c = p.scalars.count(cn) ? p.scalars.at(cn) : 0.0;
    prob.constraints.push_back(std::move(con));
  }
  if (prob.constraints.empty()) throw ParseError("qcqp needs at least one constraint matrix A1");
  if (p.vectors.count("x0")) prob.slater_point = p.vectors.at("x0");

  const QcqpSolution sol = qcqp_solve(prob, flags.seed, sdp_options(flags));

  json outputs;
  outputs["x"] = vector_to_json(sol.x);
  outputs["value"] = sol.value;
  outputs["sdp_value"] = sol.sdp_value;
  outputs["sdp_status"] = to_string(sol.sdp_status);
  outputs["recovery_index"] = sol.recovery_index;
  outputs["duals"] = json{{"y0", sol.duals.y0},
                          {"y", sol.duals.y},
                          {"complementarity", sol.duals.complementarity}};

  std::vector<Residual> rs;
  if (!flags.no_verify) {
    const QuaternionVectord x = vector_from_json(outputs["x"]);
    const double scale = 1.0 + std::abs(outputs["sdp_value"].get<double>());
    double worst = 0.0;
    for (std::size_t j = 0; j < prob.constraints.size(); ++j) {
      worst = std::max(worst, qcqp_constraint_value(prob, static_cast<int>(j), x));
    }
    rs.push_back({"constraint_feasibility", std::max(0.0, worst), 1e-6 * scale});
    rs.push_back({"objective_matches_relaxation",
                  std::abs(qcqp_objective(prob, x) - sol.sdp_value) / scale, 1e-5});
    // complementarity of the lifted point against the emitted duals
    QuaternionVectord lifted(n + 1);
    lifted.set(0, {1, 0, 0, 0});
    for (Eigen::Index i = 0; i < n; ++i) lifted.set(i + 1, x(i));
    const std::vector<HermitianMatrixd> bs = homogenize(prob);
    QuaternionMatrixd ym = -bs[0].matrix() + sol.duals.y0 * bs.back().matrix();
    for (std::size_t j = 0; j < prob.constraints.size(); ++j) {
      ym += sol.duals.y[j] * bs[j + 1].matrix();
    }
    rs.push_back({"complementarity",
                  std::abs(inner_product(ym, outer(lifted, lifted))) / scale, 1e-6});
  }
  bool ok = true;
  const json jres = residuals_to_json(rs, ok);
  return emit(flags, "qcqp", digest_str, ok ? "ok" : "verification-failure", outputs, jres,
              ok ? kExitOk : kExitVerification);
}

int run_check(const Flags& flags, const ProblemFile& p, const std::string& digest_str) {
  json outputs;
  json matrices = json::object();
  std::vector<Residual> rs;
  for (const auto& [name, entry] : p.matrices) {
    json info;
    info["rows"] = entry.value.rows();
    info["cols"] = entry.value.cols();
    info["hermitian"] = entry.hermitian;
    if (entry.psd) {
      const EigenDecomposition eig = eig_hermitian(HermitianMatrixd(hermitian_part(entry.value)));
      const double lmax = eig.eigenvalues.size() ? std::max(eig.eigenvalues(0), 0.0) : 0.0;
      const double lmin = eig.eigenvalues.size() ? eig.eigenvalues(eig.eigenvalues.size() - 1) : 0.0;
      info["min_eigenvalue"] = lmin;
      rs.push_back({"psd_" + name, std::max(0.0, -lmin) / (1.0 + lmax), 1e-9});
    }
    matrices[name] = std::move(info);
  }
  outputs["matrices"] = std::move(matrices);
  outputs["vectors"] = p.vectors.size();
  outputs["scalars"] = p.scalars.size();
  bool ok = true;
  const json jres = residuals_to_json(rs, ok);
  return emit(flags, "check", digest_str, ok ? "ok" : "verification-failure", outputs, jres,
              ok ? kExitOk : kExitVerification);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quaternion Hermitian matrix decomposition and optimization toolkit"};
  app.require_subcommand(1);

  Flags flags;
  std::string command;
  for (const std::string name : {"decompose", "jnr", "sproc", "qcqp", "check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("input", flags.input, "problem file (JSON)")->required();
    sub->add_option("--tol", flags.tol, "master relative tolerance");
    sub->add_option("--max-iter", flags.max_iter, "SDP iteration cap");
    sub->add_option("--seed", flags.seed, "sampling RNG seed");
    sub->add_option("--output", flags.output, "result file path (default stdout)");
    sub->add_flag("--no-verify", flags.no_verify, "skip the verification pass");
    sub->callback([&command, name]() { command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string bytes = read_file(flags.input);
    const std::string digest_str = digest(bytes);
    const ProblemFile problem = parse_problem_text(bytes, flags.input);
    if (command == "decompose") return run_decompose(flags, problem, digest_str);
    if (command == "jnr") return run_jnr(flags, problem, digest_str);
    if (command == "sproc") return run_sproc(flags, problem, digest_str);
    if (command == "qcqp") return run_qcqp(flags, problem, digest_str);
    return run_check(flags, problem, digest_str);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ContractError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
