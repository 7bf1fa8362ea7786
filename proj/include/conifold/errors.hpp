#pragma once

#include <stdexcept>
#include <string>

namespace conifold {

struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

struct convergence_error : std::runtime_error {
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

struct quadrature_error : std::runtime_error {
  explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

// raised when an internal cross-check (finite differences, oracle agreement,
// exact identity) fails beyond its stated tolerance
struct verification_error : std::runtime_error {
  explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

struct type_error : std::runtime_error {
  explicit type_error(const std::string& what) : std::runtime_error(what) {}
};

struct degree_error : std::runtime_error {
  explicit degree_error(const std::string& what) : std::runtime_error(what) {}
};

struct positivity_error : std::runtime_error {
  explicit positivity_error(const std::string& what) : std::runtime_error(what) {}
};

struct search_error : std::runtime_error {
  explicit search_error(const std::string& what) : std::runtime_error(what) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conifold
