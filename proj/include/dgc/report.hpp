#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dgc {

struct Violation {
  std::string axiom;
  /// Names of the basis words, generators or pairs exhibiting the failure.
  std::vector<std::string> witness;
  /// Human-readable residual (nonzero element) or explanation.
  std::string residual;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string axiom, std::vector<std::string> witness,
           std::string residual) {
    violations.push_back(
        {std::move(axiom), std::move(witness), std::move(residual)});
  }
  void merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
  }
};

inline std::ostream& operator<<(std::ostream& os, const Violation& v) {
  os << v.axiom << " (";
  for (std::size_t i = 0; i < v.witness.size(); ++i)
    os << (i ? ", " : "") << v.witness[i];
  return os << "): " << v.residual;
}

}  // namespace dgc
