#ifndef RARCHECK_STATE_HPP
#define RARCHECK_STATE_HPP

#include "rarcheck/action.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rarcheck {

struct Command;
using Cmd = std::shared_ptr<const Command>;

/// Partial map from locations to timestamps; the action at a key is
/// recoverable from the owning timeline.
using View = std::map<Location, Rat>;

struct TimestampedOp {
  Action act;
  Rat ts;
};

/// One component's weak-memory state: per-location timelines of timestamped
/// ops, per-thread viewfronts, per-op modification views, the covered set
/// and the enqueue/push matching relation.
struct CompState {
  std::map<Location, std::map<Rat, Action>> timelines;
  std::map<Tid, View> tview;
  std::map<OpRef, View> mview;
  std::set<OpRef> cvd;
  std::map<Location, std::set<std::pair<Rat, Rat>>> matched;

  bool hasLocation(const Location &x) const { return timelines.count(x) != 0; }

  const Action *opAt(const Location &x, const Rat &ts) const {
    auto it = timelines.find(x);
    if (it == timelines.end()) return nullptr;
    auto jt = it->second.find(ts);
    return jt == it->second.end() ? nullptr : &jt->second;
  }

  std::optional<Rat> viewfront(Tid t, const Location &x) const {
    auto it = tview.find(t);
    if (it == tview.end()) return std::nullopt;
    auto jt = it->second.find(x);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
  }

  /// Largest timestamp on x's timeline.
  std::optional<Rat> maxTS(const Location &x) const {
    auto it = timelines.find(x);
    if (it == timelines.end() || it->second.empty()) return std::nullopt;
    return it->second.rbegin()->first;
  }

  bool covered(const Location &x, const Rat &ts) const {
    return cvd.count(OpRef{x, ts}) != 0;
  }

  const std::set<std::pair<Rat, Rat>> &matchedOn(const Location &o) const {
    static const std::set<std::pair<Rat, Rat>> none;
    auto it = matched.find(o);
    return it == matched.end() ? none : it->second;
  }

  friend bool operator==(const CompState &, const CompState &) = default;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Observable writes of thread t on x: ops at or after t's viewfront.
std::vector<TimestampedOp> observable(const CompState &s, Tid t,
                                      const Location &x);

/// Pointwise view combination: for every key of v1, the later of the two
/// entries (ties keep v1).
View mergeViews(const View &v1, const View &v2);

/// The op on x with maximal timestamp. Throws UsageError when x has none.
TimestampedOp lastOp(const CompState &s, const Location &x);

struct Violation {
  std::string invariant;
  std::string detail;
};

std::vector<Violation> wellformed(const CompState &s);

/// Per-thread residual program plus control bookkeeping.
struct ThreadState {
  int line = 1;  // 1-based index of the current top-level statement
  Cmd cur;       // residual of the current statement; null at a boundary
  std::map<int, int> loopCount; // loop site -> iterations consumed

  bool atBoundary() const { return cur == nullptr; }
};

/// Whole-system snapshot: residual programs, locals, both component states
/// and the Treiber ghost sets.
struct Config {
  std::map<Tid, ThreadState> threads;
  std::map<Tid, std::map<std::string, Value>> locals;
  CompState client;
  CompState lib;
  std::set<long long> usedAddr;
  std::set<long long> pushedAddr;

  Value local(Tid t, const std::string &r) const {
    auto it = locals.find(t);
    if (it == locals.end()) return Value::undef();
    auto jt = it->second.find(r);
    return jt == it->second.end() ? Value::undef() : jt->second;
  }
};

std::vector<Violation> wellformed(const Config &cfg);

/// Renumbers timestamps per location to ranks 0..k-1, remapping every view,
/// cover and matched reference. Two configurations equal up to per-location
/// order isomorphism of timestamps canonicalise identically.
Config canonicalize(const Config &cfg);

/// Deterministic serialisation of a (canonical) configuration; used as the
/// memoisation key and for byte-stable output.
std::string configKey(const Config &cfg);

std::string compStateKey(const CompState &s);

} // namespace rarcheck

#endif
