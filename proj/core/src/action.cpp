#include "rarcheck/action.hpp"

namespace rarcheck {

std::string Action::str() const {
  switch (kind) {
  case ActKind::Read:
    return "rd" + modeSuffix(mode) + "(" + loc.name + "," + rval.str() + ")";
  case ActKind::Write:
    return "wr" + modeSuffix(mode) + "(" + loc.name + "," + wval.str() + ")";
  case ActKind::Update:
    return "upd" + modeSuffix(mode) + "(" + loc.name + "," + rval.str() + "," +
           wval.str() + ")";
  case ActKind::LockInit:
    return loc.name + ".init_0";
  case ActKind::LockAcquire:
    return loc.name + ".acquire_" + std::to_string(index) + "(t" +
           std::to_string(thread) + ")";
  case ActKind::LockRelease:
    return loc.name + ".release_" + std::to_string(index);
  case ActKind::QInit:
    return loc.name + ".qinit";
  case ActKind::Enq:
    return loc.name + ".enq" + modeSuffix(mode) + "(" + wval.str() + ")";
  case ActKind::Deq:
    return loc.name + ".deq" + modeSuffix(mode) + "(" + rval.str() + ")";
  case ActKind::SInit:
    return loc.name + ".sinit";
  case ActKind::Push:
    return loc.name + ".push" + modeSuffix(mode) + "(" + wval.str() + ")";
  case ActKind::Pop:
    return loc.name + ".pop" + modeSuffix(mode) + "(" + rval.str() + ")";
  }
  return "?";
}

} // namespace rarcheck
