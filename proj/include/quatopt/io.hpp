#ifndef QUATOPT_IO_HPP
#define QUATOPT_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quatopt/quaternion_matrix.hpp"

namespace quatopt {

// Parse failure with file/field context.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct MatrixEntry {
  QuaternionMatrixd value;
  bool hermitian = false;  // tagged and validated in the file
  bool psd = false;        // tagged only; validated by the `check` command
};

// In-memory form of a problem file: named quaternion matrices (four real
// component grids each), named quaternion vectors, named real scalars and
// real vectors.
struct ProblemFile {
  int schema = 1;
  Eigen::Index n = 0;
  std::map<std::string, MatrixEntry> matrices;
  std::map<std::string, QuaternionVectord> vectors;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> real_vectors;
};

ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text, const std::string& origin = "<string>");
std::string serialize_problem(const ProblemFile& p);

// Hermitian matrices from a problem file go through this accessor, which
// enforces the tag.
const MatrixEntry& require_matrix(const ProblemFile& p, const std::string& name);
HermitianMatrixd require_hermitian(const ProblemFile& p, const std::string& name);

// FNV-1a 64-bit digest of the raw input bytes, as "fnv1a:<hex>".
std::string digest(const std::string& bytes);

}  // namespace quatopt

#endif
