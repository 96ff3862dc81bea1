#include "clsat/proof_bridge.hpp"

#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace clsat {

namespace {

/// Keeps the steps `last` depends on, renumbered in their original order.
ResolutionProof prune(const std::vector<ResolutionStep>& steps,
                      std::size_t last) {
  std::vector<bool> used(steps.size(), false);
  used[last] = true;
  for (std::size_t i = last + 1; i-- > 0;) {
    if (!used[i] || steps[i].initial) continue;
    used[steps[i].left] = true;
    used[steps[i].right] = true;
  }
  std::vector<std::size_t> index(steps.size(), 0);
  ResolutionProof out;
  for (std::size_t i = 0; i <= last; ++i) {
    if (!used[i]) continue;
    ResolutionStep s = steps[i];
    if (!s.initial) {
      s.left = index[s.left];
      s.right = index[s.right];
    }
    index[i] = out.size();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

ResolutionProof cl_to_res(const ProofLog& log, const CnfFormula& f) {
  const std::unordered_set<Clause> in_f(f.clauses().begin(),
                                        f.clauses().end());
  std::unordered_map<Clause, std::size_t> have;
  ResolutionProof out;
  auto initial_index = [&](const Clause& c) {
    if (auto it = have.find(c); it != have.end()) return it->second;
    if (!in_f.contains(c))
      throw std::invalid_argument("derivation uses unknown clause " +
                                  c.to_string());
    const std::size_t idx = out.add_initial(c);
    have.emplace(c, idx);
    return idx;
  };
  for (const LearnedClauseRecord& rec : log.records) {
    if (rec.redundant) continue;
    const auto& steps = rec.derivation.steps();
    if (steps.empty())
      throw std::invalid_argument("record without a derivation");
    std::vector<std::size_t> local(steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const ResolutionStep& s = steps[k];
      if (s.initial) {
        local[k] = initial_index(s.result);
        continue;
      }
      if (s.left >= k || s.right >= k)
        throw std::invalid_argument("derivation step refers forward");
      local[k] = out.add_resolvent(local[s.left], local[s.right], s.pivot);
      if (out[local[k]].result != s.result)
        throw std::invalid_argument("derivation records a wrong resolvent");
    }
    const std::size_t last = local.back();
    if (out[last].result != rec.clause)
      throw std::invalid_argument("derivation does not end in " +
                                  rec.clause.to_string());
    have.emplace(rec.clause, last);
    if (rec.clause.empty()) return prune(out.steps(), last);
  }
  throw std::invalid_argument("log does not end with the empty clause");
}

ResolutionProof normalize_refutation(const ResolutionProof& p,
                                     const CnfFormula& f) {
  if (auto r = check_res_refutation(p, f); !r)
    throw std::invalid_argument("not a refutation: " + r.reason);
  std::vector<ResolutionStep> steps = p.steps();
  const std::size_t n = steps.size();
  std::vector<std::optional<std::size_t>> alias(n);
  auto target = [&](std::size_t s) {
    while (alias[s]) s = *alias[s];
    return s;
  };

  // Re-resolves every step after `from` against its current antecedents.
  auto rebuild = [&](std::size_t from) {
    for (std::size_t s = from; s < n; ++s) {
      if (alias[s] || steps[s].initial) continue;
      ResolutionStep& st = steps[s];
      st.left = target(st.left);
      st.right = target(st.right);
      const Clause& a = steps[st.left].result;
      const Clause& b = steps[st.right].result;
      const Lit pos = Lit::positive(st.pivot);
      const Lit neg = Lit::negative(st.pivot);
      const bool a_pos = a.contains(pos), a_neg = a.contains(neg);
      const bool b_pos = b.contains(pos), b_neg = b.contains(neg);
      if ((a_pos && b_neg) || (a_neg && b_pos)) {
        st.result = *resolve(a, b, st.pivot);
      } else if (!a_pos && !a_neg) {
        alias[s] = st.left;
      } else {
        alias[s] = st.right;
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (alias[i] || steps[i].initial) continue;
    const Clause& c = steps[i].result;
    bool changed = false;
    // An earlier clause inside c replaces it outright.
    for (std::size_t j = 0; j < i && !changed; ++j) {
      if (alias[j] || !steps[j].result.subset_of(c)) continue;
      alias[i] = j;
      changed = true;
    }
    if (!changed) {
      // Earlier clauses with exactly one literal outside c, by that literal.
      std::unordered_map<std::uint32_t, std::vector<std::size_t>> by_outside;
      for (std::size_t j = 0; j < i; ++j) {
        if (alias[j]) continue;
        std::optional<Lit> outside;
        bool usable = true;
        for (Lit l : steps[j].result) {
          if (c.contains(l)) continue;
          if (outside) {
            usable = false;
            break;
          }
          outside = l;
        }
        if (usable && outside) by_outside[outside->code()].push_back(j);
      }
      for (const auto& [code, js] : by_outside) {
        const Lit l = Lit::from_code(code);
        if (l.negated()) continue;
        auto it = by_outside.find((~l).code());
        if (it == by_outside.end()) continue;
        for (std::size_t j : js) {
          for (std::size_t k : it->second) {
            auto r = resolve(steps[j].result, steps[k].result, l.var());
            if (!r || r->size() >= c.size()) continue;
            steps[i] = ResolutionStep::make_resolvent(std::min(j, k),
                                                      std::max(j, k),
                                                      l.var(), *r);
            changed = true;
            break;
          }
          if (changed) break;
        }
        if (changed) break;
      }
    }
    if (!changed) continue;
    rebuild(i + 1);
    --i;  // look at the replacement again
  }

  std::size_t last = target(n - 1);
  for (std::size_t s = 0; s < n; ++s) {
    if (!alias[s] && steps[s].result.empty()) {
      last = s;
      break;
    }
  }
  ResolutionProof out = prune(steps, last);
  if (auto r = check_res_refutation(out, f); !r)
    throw std::logic_error("normalization broke the refutation: " + r.reason);
  return out;
}

std::vector<Clause> derived_clauses(const ResolutionProof& p,
                                    const CnfFormula& f) {
  std::unordered_set<Clause> skip(f.clauses().begin(), f.clauses().end());
  std::vector<Clause> out;
  for (const ResolutionStep& s : p.steps()) {
    if (s.initial || s.result.empty()) continue;
    if (skip.insert(s.result).second) out.push_back(s.result);
  }
  return out;
}

ProofTraceExtension proof_trace_extension(const CnfFormula& f,
                                          const ResolutionProof& p) {
  if (auto r = check_res_refutation(p, f); !r)
    throw std::invalid_argument("not a refutation: " + r.reason);
  const ResolutionStep& last = p.steps().back();
  if (!last.initial && (p[last.left].result.size() != 1 ||
                        p[last.right].result.size() != 1))
    throw std::invalid_argument(
        "refutation does not end by resolving two unit clauses");
  ProofTraceExtension pt;
  pt.traced = derived_clauses(p, f);
  const std::uint32_t n = f.num_vars();
  pt.formula = CnfFormula(n + static_cast<std::uint32_t>(pt.traced.size()),
                          f.clauses());
  for (std::size_t k = 0; k < pt.traced.size(); ++k) {
    const Lit t = Lit::positive(Var(n + static_cast<std::uint32_t>(k) + 1));
    for (Lit x : pt.traced[k]) pt.formula.add_clause(Clause({~x, t}));
    pt.sequence.push(t);
  }
  return pt;
}

BranchingSequence res_to_clmm_sequence(const ResolutionProof& p,
                                       const CnfFormula& f) {
  BranchingSequence seq;
  for (const Clause& c : derived_clauses(p, f)) {
    for (Lit x : c) seq.push(x);
    seq.push_restart();
  }
  return seq;
}

bool ReplayReport::faithful() const {
  return result.outcome == Outcome::kUnsat && learned == expected &&
         result.stats.restarts <= expected.size();
}

ReplayReport replay_clmm(const CnfFormula& f, const ResolutionProof& p,
                         LearningScheme scheme) {
  ReplayReport rep;
  rep.expected = derived_clauses(p, f);
  SolverConfig cfg;
  cfg.learning = scheme;
  cfg.cl_minus_minus = true;
  cfg.sequence = res_to_clmm_sequence(p, f);
  rep.result = solve(f, cfg);
  for (const LearnedClauseRecord& rec : rep.result.proof.records)
    if (!rec.redundant && !rec.reason_only && !rec.clause.empty())
      rep.learned.push_back(rec.clause);
  while (rep.matched < rep.learned.size() &&
         rep.matched < rep.expected.size() &&
         rep.learned[rep.matched] == rep.expected[rep.matched])
    ++rep.matched;
  return rep;
}

}  // namespace clsat
