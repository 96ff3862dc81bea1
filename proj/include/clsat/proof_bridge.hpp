#pragma once

// Conversions between clause-learning runs and resolution refutations:
// stitching a run's trivial derivations into one refutation, simplifying a
// refutation, extending a formula with proof-trace variables, and compiling a
// refutation into a restart-marked branching sequence for relaxed branching.

#include <vector>

#include "clsat/formula.hpp"
#include "clsat/resolution.hpp"
#include "clsat/sequence.hpp"
#include "clsat/solver.hpp"

namespace clsat {

/// Concatenates the trivial derivations of every non-redundant record,
/// mapping initial steps to clauses of `f` or to earlier learned clauses,
/// and drops steps the final empty clause does not depend on. Throws
/// std::invalid_argument if a derivation uses an unknown clause or the log
/// does not end with the empty clause.
ResolutionProof cl_to_res(const ProofLog& log, const CnfFormula& f);

/// Repeatedly replaces a derived clause by a strict subclause that is an
/// earlier clause or the resolvent of two earlier clauses, re-resolving the
/// steps that depended on it (a step whose pivot disappeared becomes a copy
/// of the antecedent that lost it). Duplicates are merged, the proof is cut
/// at its first empty clause, and unused steps are removed.
ResolutionProof normalize_refutation(const ResolutionProof& p,
                                     const CnfFormula& f);

/// Derived clauses of `p` in order, excluding clauses of `f`, repeats, and
/// the final empty clause.
std::vector<Clause> derived_clauses(const ResolutionProof& p,
                                    const CnfFormula& f);

struct ProofTraceExtension {
  CnfFormula formula;
  /// t_C for each traced clause C, as positive literals (branched FALSE).
  BranchingSequence sequence;
  std::vector<Clause> traced;
};

/// Adds a variable t_C = num_vars + position (1-based) for every clause C of
/// derived_clauses(p, f), with clauses (~x | t_C) for x in C. Throws
/// std::invalid_argument unless `p` refutes `f` and ends by resolving two
/// complementary unit clauses.
ProofTraceExtension proof_trace_extension(const CnfFormula& f,
                                          const ResolutionProof& p);

/// For each clause of derived_clauses(p, f): its literals, then a restart.
BranchingSequence res_to_clmm_sequence(const ResolutionProof& p,
                                       const CnfFormula& f);

struct ReplayReport {
  SolveResult result;
  /// derived_clauses(p, f), the clauses the replay should learn in order.
  std::vector<Clause> expected;
  /// Non-redundant, non-empty clauses the replay learned, in order.
  std::vector<Clause> learned;
  /// Length of the common prefix of `expected` and `learned`.
  std::size_t matched = 0;

  /// Learned exactly `expected`, used at most |expected| restarts, and
  /// ended UNSAT.
  bool faithful() const;
};

/// Runs res_to_clmm_sequence(p, f) under relaxed branching with `scheme`,
/// restarts at the sequence markers, and no other budget limits.
ReplayReport replay_clmm(const CnfFormula& f, const ResolutionProof& p,
                         LearningScheme scheme = LearningScheme::kFirstNewCut);

}  // namespace clsat
