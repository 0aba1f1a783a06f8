#ifndef RARCHECK_ACTION_HPP
#define RARCHECK_ACTION_HPP

#include "rarcheck/rational.hpp"
#include "rarcheck/value.hpp"

#include <compare>
#include <string>

namespace rarcheck {

using Tid = int;

enum class LocKind { ClientVar, LibraryVar, ObjectHandle };

/// A named global location. Client and library name sets are disjoint, so
/// the name alone identifies the location; the kind records which component
/// owns it.
struct Location {
  std::string name;
  LocKind kind = LocKind::ClientVar;

  bool isClient() const { return kind == LocKind::ClientVar; }
  bool isObject() const { return kind == LocKind::ObjectHandle; }

  friend bool operator==(const Location &, const Location &) = default;
  friend std::strong_ordering operator<=>(const Location &a, const Location &b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.kind <=> b.kind;
  }
};

enum class SyncMode { Relaxed, Release, Acquire, RelAcq };

inline bool modeReleasing(SyncMode m) {
  return m == SyncMode::Release || m == SyncMode::RelAcq;
}
inline bool modeAcquiring(SyncMode m) {
  return m == SyncMode::Acquire || m == SyncMode::RelAcq;
}

inline std::string modeSuffix(SyncMode m) {
  switch (m) {
  case SyncMode::Relaxed: return "";
  case SyncMode::Release: return "^R";
  case SyncMode::Acquire: return "^A";
  case SyncMode::RelAcq: return "^RA";
  }
  return "";
}

enum class ActKind {
  Read,
  Write,
  Update,
  LockInit,
  LockAcquire,
  LockRelease,
  QInit,
  Enq,
  Deq,
  SInit,
  Push,
  Pop,
};

/// A memory or abstract-method event. Unused fields stay at their defaults
/// so structural comparison is meaningful across action kinds.
struct Action {
  ActKind kind = ActKind::Write;
  Location loc;       // variable, or the object handle for method actions
  Value rval;         // value read (Read/Update) or returned (Deq/Pop)
  Value wval;         // value written (Write/Update) or pushed/enqueued
  SyncMode mode = SyncMode::Relaxed;
  long long index = 0; // lock operation counter
  Tid thread = 0;      // performing thread; 0 for initialisation ops

  static Action read(Location x, Value v, SyncMode m, Tid t) {
    Action a;
    a.kind = ActKind::Read;
    a.loc = std::move(x);
    a.rval = v;
    a.mode = m;
    a.thread = t;
    return a;
  }
  static Action write(Location x, Value v, SyncMode m, Tid t) {
    Action a;
    a.kind = ActKind::Write;
    a.loc = std::move(x);
    a.wval = v;
    a.mode = m;
    a.thread = t;
    return a;
  }
  static Action update(Location x, Value rd, Value wr, SyncMode m, Tid t) {
    Action a;
    a.kind = ActKind::Update;
    a.loc = std::move(x);
    a.rval = rd;
    a.wval = wr;
    a.mode = m;
    a.thread = t;
    return a;
  }

  bool isWriteLike() const {
    // Actions that appear in `ops` as modification-order entries for a
    // plain memory location.
    return kind == ActKind::Write || kind == ActKind::Update;
  }
  bool isMethod() const {
    return kind >= ActKind::LockInit;
  }
  bool isInitMarker() const {
    return kind == ActKind::LockInit || kind == ActKind::QInit ||
           kind == ActKind::SInit;
  }
  /// Ops that certify an empty queue/stack at their timestamp.
  bool isEmptyMarker() const {
    if (kind == ActKind::QInit || kind == ActKind::SInit) return true;
    if ((kind == ActKind::Deq || kind == ActKind::Pop) && rval.isEmpty())
      return true;
    return false;
  }

  /// Whether a synchronising read of this op transfers its view.
  bool releasing() const {
    switch (kind) {
    case ActKind::Write:
    case ActKind::Update:
    case ActKind::Enq:
    case ActKind::Push:
      return modeReleasing(mode);
    case ActKind::LockRelease:
    case ActKind::LockAcquire:
      return true; // lock hand-over ops always carry their view
    default:
      return false;
    }
  }

  Value writtenValue() const { return wval; }

  friend bool operator==(const Action &, const Action &) = default;
  friend std::strong_ordering operator<=>(const Action &a, const Action &b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.loc <=> b.loc; c != 0) return c;
    if (auto c = a.rval <=> b.rval; c != 0) return c;
    if (auto c = a.wval <=> b.wval; c != 0) return c;
    if (auto c = a.mode <=> b.mode; c != 0) return c;
    if (auto c = a.index <=> b.index; c != 0) return c;
    return a.thread <=> b.thread;
  }

  std::string str() const;
};

/// Reference to one timestamped op inside a configuration: the location's
/// timeline plus the timestamp within it.
struct OpRef {
  Location loc;
  Rat ts;

  friend bool operator==(const OpRef &, const OpRef &) = default;
  friend std::strong_ordering operator<=>(const OpRef &a, const OpRef &b) {
    if (auto c = a.loc <=> b.loc; c != 0) return c;
    return a.ts <=> b.ts;
  }
};

} // namespace rarcheck

#endif
