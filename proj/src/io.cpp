#include "quatopt/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace quatopt {

using nlohmann::json;

namespace {

Eigen::MatrixXd parse_grid(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) throw ParseError(where + ": expected a non-empty 2D array");
  const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  if (ncols == 0) throw ParseError(where + ": expected a non-empty 2D array");
  Eigen::MatrixXd m(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) {
      throw ParseError(where + ": ragged rows at row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!rows[i][j].is_number()) {
        throw ParseError(where + ": non-numeric entry at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
      m(i, j) = rows[i][j].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd parse_list(const json& entries, const std::string& where) {
  if (!entries.is_array()) throw ParseError(where + ": expected an array");
  Eigen::VectorXd v(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].is_number()) {
      throw ParseError(where + ": non-numeric entry at " + std::to_string(i));
    }
    v(i) = entries[i].get<double>();
  }
  return v;
}

json dump_grid(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json dump_list(const Eigen::VectorXd& v) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) entries.push_back(v(i));
  return entries;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  ProblemFile p;
  try {
    p.schema = j.value("schema", 1);
    if (p.schema != 1) throw ParseError(origin + ": unsupported schema version");
    if (!j.contains("n") || !j["n"].is_number_integer()) {
      throw ParseError(origin + ": missing integer field 'n'");
    }
    p.n = j["n"].get<Eigen::Index>();

    const json jmatrices = j.value("matrices", json::object());
    for (const auto& [name, jm] : jmatrices.items()) {
      const std::string where = origin + ": matrix '" + name + "'";
      MatrixEntry entry;
      Eigen::MatrixXd a = parse_grid(jm.at("a"), where + ".a");
      Eigen::MatrixXd b = parse_grid(jm.at("b"), where + ".b");
      Eigen::MatrixXd c = parse_grid(jm.at("c"), where + ".c");
      Eigen::MatrixXd d = parse_grid(jm.at("d"), where + ".d");
      if (b.rows() != a.rows() || c.rows() != a.rows() || d.rows() != a.rows() ||
          b.cols() != a.cols() || c.cols() != a.cols() || d.cols() != a.cols()) {
        throw ParseError(where + ": component grids have mismatched shapes");
      }
      entry.value = QuaternionMatrixd(std::move(a), std::move(b), std::move(c), std::move(d));
      entry.hermitian = jm.value("hermitian", false);
      entry.psd = jm.value("psd", false);
      if (entry.hermitian) {
        if (entry.value.rows() != entry.value.cols()) {
          throw ParseError(where + ": tagged hermitian but not square");
        }
        const double tol = 1e-9 * (1.0 + max_abs(entry.value));
        if (!is_hermitian(entry.value, tol)) {
          throw ParseError(where + ": tagged hermitian but fails the componentwise test "
                           "(a symmetric; b, c, d skew)");
        }
      }
      p.matrices.emplace(name, std::move(entry));
    }

    const json jvectors = j.value("vectors", json::object());
    for (const auto& [name, jv] : jvectors.items()) {
      const std::string where = origin + ": vector '" + name + "'";
      Eigen::VectorXd a = parse_list(jv.at("a"), where + ".a");
      Eigen::VectorXd b = parse_list(jv.at("b"), where + ".b");
      Eigen::VectorXd c = parse_list(jv.at("c"), where + ".c");
      Eigen::VectorXd d = parse_list(jv.at("d"), where + ".d");
      if (b.size() != a.size() || c.size() != a.size() || d.size() != a.size()) {
        throw ParseError(where + ": component lists have mismatched lengths");
      }
      p.vectors.emplace(name, QuaternionVectord(std::move(a), std::move(b), std::move(c),
                                                std::move(d)));
    }

    const json jscalars = j.value("scalars", json::object());
    for (const auto& [name, js] : jscalars.items()) {
      if (!js.is_number()) throw ParseError(origin + ": scalar '" + name + "' is not numeric");
      p.scalars.emplace(name, js.get<double>());
    }

    const json jreals = j.value("real_vectors", json::object());
    for (const auto& [name, jr] : jreals.items()) {
      const Eigen::VectorXd v = parse_list(jr, origin + ": real_vector '" + name + "'");
      p.real_vectors.emplace(name, std::vector<double>(v.data(), v.data() + v.size()));
    }
  } catch (const json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return p;
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str(), path);
}

std::string serialize_problem(const ProblemFile& p) {
  json j;
  j["schema"] = p.schema;
  j["n"] = p.n;
  json matrices = json::object();
  for (const auto& [name, entry] : p.matrices) {
    json jm;
    jm["a"] = dump_grid(entry.value.a);
    jm["b"] = dump_grid(entry.value.b);
    jm["c"] = dump_grid(entry.value.c);
    jm["d"] = dump_grid(entry.value.d);
    if (entry.hermitian) jm["hermitian"] = true;
    if (entry.psd) jm["psd"] = true;
    matrices[name] = std::move(jm);
  }
  j["matrices"] = std::move(matrices);
  json vectors = json::object();
  for (const auto& [name, v] : p.vectors) {
    json jv;
    jv["a"] = dump_list(v.a);
    jv["b"] = dump_list(v.b);
    jv["c"] = dump_list(v.c);
    jv["d"] = dump_list(v.d);
    vectors[name] = std::move(jv);
  }
  j["vectors"] = std::move(vectors);
  json scalars = json::object();
  for (const auto& [name, s] : p.scalars) scalars[name] = s;
  j["scalars"] = std::move(scalars);
  json reals = json::object();
  for (const auto& [name, v] : p.real_vectors) reals[name] = v;
  j["real_vectors"] = std::move(reals);
  return j.dump(2);
}

const MatrixEntry& require_matrix(const ProblemFile& p, const std::string& name) {
  const auto it = p.matrices.find(name);
  if (it == p.matrices.end()) throw ParseError("missing required matrix '" + name + "'");
  return it->second;
}

HermitianMatrixd require_hermitian(const ProblemFile& p, const std::string& name) {
  const MatrixEntry& entry = require_matrix(p, name);
  if (!entry.hermitian) throw ParseError("matrix '" + name + "' must be tagged hermitian");
  // exact symmetrization so downstream validation at machine tolerance passes
  return HermitianMatrixd(hermitian_part(entry.value));
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace quatopt
