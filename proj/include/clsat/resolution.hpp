#pragma once

// Resolution proofs as step lists, with checkers for refutations and for
// trivial (linear, regular, input) derivations, and a text serialization.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "clsat/formula.hpp"

namespace clsat {

struct ResolutionStep {
  Clause result;
  bool initial = true;
  // Only meaningful for resolvents; indices refer to earlier steps.
  std::size_t left = 0;
  std::size_t right = 0;
  Var pivot;

  static ResolutionStep make_initial(Clause c) {
    return ResolutionStep{std::move(c), true, 0, 0, Var()};
  }
  static ResolutionStep make_resolvent(std::size_t left, std::size_t right,
                                       Var pivot, Clause result) {
    return ResolutionStep{std::move(result), false, left, right, pivot};
  }
  bool operator==(const ResolutionStep&) const = default;
};

class ResolutionProof {
 public:
  const std::vector<ResolutionStep>& steps() const { return steps_; }
  std::vector<ResolutionStep>& mutable_steps() { return steps_; }
  /// Total number of clauses in the proof.
  std::size_t size() const { return steps_.size(); }
  std::size_t resolvent_count() const;
  bool empty() const { return steps_.empty(); }
  const Clause& conclusion() const { return steps_.back().result; }
  const ResolutionStep& operator[](std::size_t i) const { return steps_[i]; }

  std::size_t add_initial(Clause c);
  /// Appends the resolvent of steps `left` and `right` on `pivot`. Throws
  /// std::invalid_argument if they do not clash on the pivot.
  std::size_t add_resolvent(std::size_t left, std::size_t right, Var pivot);
  void push_back(ResolutionStep step) { steps_.push_back(std::move(step)); }

  bool operator==(const ResolutionProof&) const = default;

 private:
  std::vector<ResolutionStep> steps_;
};

/// A ResolutionProof whose shape satisfies check_trivial.
using TrivialDerivation = ResolutionProof;

struct CheckResult {
  bool ok = true;
  std::size_t step = 0;
  std::string reason;

  static CheckResult valid() { return {}; }
  static CheckResult invalid(std::size_t step, std::string reason) {
    return {false, step, std::move(reason)};
  }
  explicit operator bool() const { return ok; }
};

/// Every initial step must satisfy `is_initial`; every resolvent must have
/// earlier antecedents clashing on the pivot and the exact resolvent as its
/// result.
CheckResult check_derivation(
    const ResolutionProof& p,
    const std::function<bool(const Clause&)>& is_initial);

/// Valid derivation from `f` ending in the empty clause.
CheckResult check_res_refutation(const ResolutionProof& p, const CnfFormula& f);

/// Distinct pivots; every resolvent combines the running clause (the first
/// step, then the latest resolvent) with an initial step.
CheckResult check_trivial(const ResolutionProof& p);

/// "i <lits> 0" for initial steps, "r <left> <right> <pivot> <lits> 0" for
/// resolvents; step indices are 0-based.
void write_proof(std::ostream& out, const ResolutionProof& p);
std::string write_proof(const ResolutionProof& p);
ResolutionProof parse_proof(std::istream& in);
ResolutionProof parse_proof(std::string_view text);

}  // namespace clsat
