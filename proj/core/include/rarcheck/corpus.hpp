#ifndef RARCHECK_CORPUS_HPP
#define RARCHECK_CORPUS_HPP

#include "rarcheck/lang.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rarcheck {

struct RefinementExpectation {
  std::string abstractKind;
  std::string concreteKind;
  bool expectPass = true;
};

struct CorpusEntry {
  std::string name;
  std::string summary;
  ProgramSpec spec;

  // Machine-checkable expectations under the default bounds.
  std::vector<std::string> finalVars;
  std::optional<std::set<std::vector<Value>>> expectedFinals;
  std::optional<bool> expectOutlineValid;
  std::vector<RefinementExpectation> refinements;
  bool checkTreiberInvariants = false;
  bool checkFifo = false;
  bool checkLifo = false;
  int loopBound = 3;
};

/// Returns the named builtin; throws UsageError with suggestions on unknown
/// names.
const CorpusEntry &builtin(const std::string &name);

std::vector<std::string> builtinNames();

} // namespace rarcheck

#endif
