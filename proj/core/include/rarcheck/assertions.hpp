#ifndef RARCHECK_ASSERTIONS_HPP
#define RARCHECK_ASSERTIONS_HPP

#include "rarcheck/assertions_ast.hpp"
#include "rarcheck/explore.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rarcheck {

/// Truth of a view-based assertion in one configuration. Throws UsageError
/// on names that do not resolve.
bool evalAssertion(const Asrt &a, const Config &cfg, const ExecProgram &prog);

struct AnnotationVerdict {
  Tid tid = 0;  // 0 = program-level (initially / invariant / post)
  int line = 0; // 0 for program-level assertions
  std::string text;
  bool holds = true;
  std::optional<int> witness; // violating configuration index
};

struct OutlineReport {
  std::vector<AnnotationVerdict> verdicts;
  bool truncated = false;
  bool allHold() const {
    for (const auto &v : verdicts)
      if (!v.holds) return false;
    return true;
  }
};

/// Checks every annotation of the proof outline semantically: an assertion
/// attached to a statement must hold in each reachable configuration where
/// that statement is about to start (including loop re-entry); `initially`
/// on the initial configuration, `invariant` everywhere, `post` on
/// terminals.
OutlineReport checkOutline(const ExecProgram &prog, const Exploration &ex);

// ---------------------------------------------------------------------------
// Semantic Hoare-rule checking.

/// Matches the transitions a rule's statement denotes.
struct StmtPattern {
  std::optional<Tid> tid;
  std::optional<StmtKind> stmt;
  std::optional<ActKind> act;
  std::optional<std::string> locName;
  std::function<bool(const Edge &, const Exploration &)> extra;

  bool matches(const Edge &e, const Exploration &ex) const;
};

struct TripleVerdict {
  enum class V { Pass, Fail, Vacuous } v = V::Vacuous;
  int fired = 0;          // transitions with a true precondition
  std::string witness;    // failing transition description
};

/// Over all explored transitions matching the pattern whose source satisfies
/// pre, the target must satisfy post (post may inspect the matched edge).
TripleVerdict
checkHoareTriple(const Exploration &ex, const ExecProgram &prog,
                 const StmtPattern &pat, const Asrt &pre,
                 const std::function<Asrt(const Edge &)> &postFor);

// ---------------------------------------------------------------------------
// The built-in rule corpus: Hoare rules checked semantically over designated
// corpus programs.

struct RuleResult {
  std::string ruleset; // lock | memory | stack
  std::string id;
  std::string description;
  TripleVerdict::V verdict = TripleVerdict::V::Vacuous;
  int fired = 0;
  std::string witness;
  std::string program; // corpus program(s) used
};

std::vector<RuleResult> checkRuleset(const std::string &name, const Bounds &b);

} // namespace rarcheck

#endif
