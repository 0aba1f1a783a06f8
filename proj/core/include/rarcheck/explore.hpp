#ifndef RARCHECK_EXPLORE_HPP
#define RARCHECK_EXPLORE_HPP

#include "rarcheck/lang.hpp"
#include "rarcheck/memory.hpp"
#include "rarcheck/objects.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rarcheck {

struct Bounds {
  int maxLoopIter = 3;
  long long maxSteps = 1000000; // canonical-configuration budget
  std::vector<Value> valueDomain = {Value::integer(0), Value::integer(1),
                                    Value::integer(2), Value::integer(5)};
  int workers = 1;
};

struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int src = -1;
  int dst = -1;
  Tid tid = 0;
  bool silent = true;
  Action action; // valid when !silent
  StmtKind stmt = StmtKind::None;
  int line = 0; // source line of the originating statement
};

struct CombinedStep {
  Config next;          // canonical successor
  bool silent = true;
  Action action;
  StmtKind stmt = StmtKind::None;
  Tid tid = 0;
  int line = 0;
};

struct Exploration {
  std::vector<Config> configs; // canonical, in discovery order
  std::vector<Edge> edges;
  std::set<int> terminals;  // all threads done
  std::set<int> truncated;  // a loop bound suppressed some step here
  std::vector<std::vector<int>> out; // adjacency: config -> edge indices
};

/// Union over threads of program, memory and object steps, resolved against
/// the current component states. Blocked threads contribute nothing. Sets
/// `*suppressed` when a loop bound filtered an otherwise-enabled step.
std::vector<CombinedStep> combinedSteps(const Config &cfg,
                                        const ExecProgram &prog,
                                        const Bounds &b,
                                        bool *suppressed = nullptr);

/// Bounded exhaustive BFS over canonicalised configurations. Deterministic:
/// two runs on the same program and bounds produce identical results.
Exploration explore(const ExecProgram &prog, const Bounds &b);

/// Projection of terminal local states onto the given locals.
std::set<std::vector<Value>> finalValuations(const Exploration &ex,
                                             const ExecProgram &prog,
                                             const std::vector<std::string> &vars);

} // namespace rarcheck

#endif
