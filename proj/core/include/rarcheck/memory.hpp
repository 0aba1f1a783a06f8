#ifndef RARCHECK_MEMORY_HPP
#define RARCHECK_MEMORY_HPP

#include "rarcheck/lang.hpp"
#include "rarcheck/state.hpp"

#include <vector>

namespace rarcheck {

/// One resolved outcome of a memory transition: updated executing and
/// context component states plus the fully-valued action.
struct MemSuccessor {
  CompState exec;
  CompState ctx;
  Action action;
};

struct MemStepResult {
  std::vector<MemSuccessor> successors;
};

/// Builds the initial configuration: one timestamp-0 write per variable,
/// object-init ops for abstract objects, all viewfronts at the init ops,
/// initial modification views spanning both components, locals per Init.
Config initConfiguration(const ExecProgram &prog);

/// The Read / Write / Update transitions over (executing, context) component
/// states. `vc`, `neq` and `faiIncrement` constrain the template's free value
/// slots. An empty successor set means the action is disabled, not an error.
MemStepResult memStep(const CompState &exec, const CompState &ctx, Tid t,
                      const Action &proto, StepLabel::VC vc, const Value &neq,
                      bool faiIncrement);

} // namespace rarcheck

#endif
