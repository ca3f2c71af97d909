#ifndef QUATOPT_ERRORS_HPP
#define QUATOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quatopt {

// Invalid value for the operation (zero inverse, non-Hermitian input, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Incompatible shapes.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Matrix expected to be positive semidefinite is not, beyond tolerance.
class NotPsdError : public DomainError {
 public:
  explicit NotPsdError(const std::string& what) : DomainError(what) {}
};

// A documented precondition between caller and callee was violated.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// An iterative procedure failed to reach its advertised accuracy.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quatopt

#endif
