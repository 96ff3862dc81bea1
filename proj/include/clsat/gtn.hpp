#pragma once

// GT_n ordering formulas: x_{i,j} reads "i is greater than j"; the clauses
// say the order is antisymmetric and transitive yet every element has
// something greater than it.

#include <cstdint>
#include <vector>

#include "clsat/formula.hpp"

namespace clsat {

class GtnInstance {
 public:
  /// Throws std::invalid_argument for n < 3.
  explicit GtnInstance(std::uint32_t n);

  std::uint32_t n() const { return n_; }
  std::uint32_t num_vars() const { return n_ * (n_ - 1); }
  /// x_{i,j} for i != j in [1, n]: (i-1)(n-1) + (j if j < i else j-1).
  Var var(std::uint32_t i, std::uint32_t j) const;

  /// Antisymmetry for i < j, then transitivity over ordered distinct
  /// triples, then one successor clause per j.
  CnfFormula formula() const;
  /// Indices of the successor clauses within formula().
  std::vector<std::size_t> successor_clauses() const;

 private:
  std::uint32_t n_;
};

CnfFormula gen_gtn(std::uint32_t n);
/// GT_n with one seeded-random successor clause deleted.
CnfFormula gen_gtn_sat(std::uint32_t n, std::uint64_t seed);

}  // namespace clsat
