#include "clsat/resolution.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace clsat {

std::size_t ResolutionProof::resolvent_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps_.begin(), steps_.end(),
                    [](const ResolutionStep& s) { return !s.initial; }));
}

std::size_t ResolutionProof::add_initial(Clause c) {
  steps_.push_back(ResolutionStep::make_initial(std::move(c)));
  return steps_.size() - 1;
}

std::size_t ResolutionProof::add_resolvent(std::size_t left,
                                           std::size_t right, Var pivot) {
  auto r = resolve(steps_.at(left).result, steps_.at(right).result, pivot);
  if (!r)
    throw std::invalid_argument("steps " + std::to_string(left) + " and " +
                                std::to_string(right) + " do not resolve on " +
                                std::to_string(pivot.index));
  steps_.push_back(ResolutionStep::make_resolvent(left, right, pivot, *r));
  return steps_.size() - 1;
}

CheckResult check_derivation(
    const ResolutionProof& p,
    const std::function<bool(const Clause&)>& is_initial) {
  const auto& steps = p.steps();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const ResolutionStep& s = steps[i];
    if (s.initial) {
      if (!is_initial(s.result))
        return CheckResult::invalid(i, "initial clause " +
                                           s.result.to_string() +
                                           " is not in the formula");
      continue;
    }
    if (s.left >= i || s.right >= i)
      return CheckResult::invalid(i, "antecedent does not precede step");
    if (s.pivot.index == 0)
      return CheckResult::invalid(i, "missing pivot");
    const Clause& a = steps[s.left].result;
    const Clause& b = steps[s.right].result;
    const Lit pos = Lit::positive(s.pivot);
    const Lit neg = Lit::negative(s.pivot);
    if (!((a.contains(pos) && b.contains(neg)) ||
          (a.contains(neg) && b.contains(pos))))
      return CheckResult::invalid(i, "bad pivot " +
                                         std::to_string(s.pivot.index));
    auto r = resolve(a, b, s.pivot);
    if (!r) return CheckResult::invalid(i, "tautological resolvent");
    if (*r != s.result)
      return CheckResult::invalid(i, "wrong resolvent: expected " +
                                         r->to_string() + ", recorded " +
                                         s.result.to_string());
  }
  return CheckResult::valid();
}

CheckResult check_res_refutation(const ResolutionProof& p,
                                 const CnfFormula& f) {
  if (p.empty()) return CheckResult::invalid(0, "empty proof");
  std::unordered_set<Clause> initial(f.clauses().begin(), f.clauses().end());
  auto r = check_derivation(
      p, [&](const Clause& c) { return initial.contains(c); });
  if (!r) return r;
  if (!p.conclusion().empty())
    return CheckResult::invalid(p.size() - 1,
                                "last clause is not the empty clause");
  return CheckResult::valid();
}

CheckResult check_trivial(const ResolutionProof& p) {
  const auto& steps = p.steps();
  std::unordered_set<std::uint32_t> pivots;
  std::optional<std::size_t> current;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const ResolutionStep& s = steps[i];
    if (s.initial) {
      if (!current) current = i;
      continue;
    }
    if (s.left >= i || s.right >= i)
      return CheckResult::invalid(i, "antecedent does not precede step");
    if (!pivots.insert(s.pivot.index).second)
      return CheckResult::invalid(i, "pivot " +
                                         std::to_string(s.pivot.index) +
                                         " resolved twice");
    const bool ok = (s.left == current && steps[s.right].initial &&
                     s.right != current) ||
                    (s.right == current && steps[s.left].initial &&
                     s.left != current);
    if (!ok)
      return CheckResult::invalid(
          i, "step does not resolve the running clause with an input clause");
    current = i;
  }
  return CheckResult::valid();
}

void write_proof(std::ostream& out, const ResolutionProof& p) {
  for (const auto& s : p.steps()) {
    if (s.initial) {
      out << 'i';
    } else {
      out << "r " << s.left << ' ' << s.right << ' ' << s.pivot.index;
    }
    for (Lit l : s.result) out << ' ' << l.to_dimacs();
    out << " 0\n";
  }
}

std::string write_proof(const ResolutionProof& p) {
  std::ostringstream out;
  write_proof(out, p);
  return out.str();
}

ResolutionProof parse_proof(std::istream& in) {
  using Kind = ParseError::Kind;
  ResolutionProof p;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == 'c' || tag[0] == '#') continue;
    ResolutionStep step;
    if (tag == "r") {
      long long left = -1, right = -1, pivot = 0;
      if (!(ls >> left >> right >> pivot) || left < 0 || right < 0 ||
          pivot <= 0)
        throw ParseError(Kind::kToken, line_no, "malformed resolvent line");
      step.initial = false;
      step.left = static_cast<std::size_t>(left);
      step.right = static_cast<std::size_t>(right);
      step.pivot = Var(static_cast<std::uint32_t>(pivot));
    } else if (tag != "i") {
      throw ParseError(Kind::kToken, line_no, "unknown step tag '" + tag + "'");
    }
    std::vector<Lit> lits;
    long long v = 0;
    bool terminated = false;
    while (ls >> v) {
      if (v == 0) {
        terminated = true;
        break;
      }
      lits.push_back(Lit::from_dimacs(static_cast<int>(v)));
    }
    if (!terminated)
      throw ParseError(Kind::kMissingTerminator, line_no,
                       "step not terminated by 0");
    try {
      step.result = Clause(std::move(lits));
    } catch (const TautologyError&) {
      throw ParseError(Kind::kTautology, line_no, "tautological step");
    }
    p.push_back(std::move(step));
  }
  return p;
}

ResolutionProof parse_proof(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_proof(in);
}

}  // namespace clsat
