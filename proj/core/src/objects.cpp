#include "rarcheck/objects.hpp"

#include <algorithm>

namespace rarcheck {

namespace {

View emptyView;

const View &mviewOf(const CompState &s, const Location &x, const Rat &ts) {
  auto it = s.mview.find(OpRef{x, ts});
  return it == s.mview.end() ? emptyView : it->second;
}

/// One representative fresh timestamp per gap of the object timeline above
/// the bound (exclusive), plus the past-the-end slot.
std::vector<Rat> insertionSlots(const CompState &s, const Location &o,
                                const Rat &lower) {
  std::vector<Rat> out;
  const auto &tl = s.timelines.at(o);
  for (auto it = tl.lower_bound(lower); it != tl.end(); ++it) {
    auto nx = std::next(it);
    if (nx == tl.end())
      out.push_back(it->first + Rat(1));
    else
      out.push_back(Rat::mid(it->first, nx->first));
  }
  return out;
}

View unionViews(const View &a, const View &b) {
  View out = a;
  for (const auto &[x, ts] : b) out[x] = ts;
  return out;
}

/// Records the uniform modification view for a new library op.
void setOpMview(CompState &lib, const CompState &cli, Tid t, const Location &o,
                const Rat &ts) {
  lib.mview[OpRef{o, ts}] = unionViews(lib.tview.at(t), cli.tview.at(t));
}

bool insideMatchedInterval(const CompState &s, const Location &o,
                           const Rat &ts) {
  for (const auto &[a, b] : s.matchedOn(o))
    if (a < ts && ts < b) return true;
  return false;
}

} // namespace

std::vector<ObjSuccessor> lockStep(const CompState &lib, const CompState &cli,
                                   Tid t, const Action &proto,
                                   bool relaxedAcquire) {
  std::vector<ObjSuccessor> out;
  const Location &l = proto.loc;
  if (!lib.hasLocation(l)) throw UsageError("lockStep: unknown lock " + l.name);
  TimestampedOp w = lastOp(lib, l);

  if (proto.kind == ActKind::LockAcquire) {
    bool available = w.act.kind == ActKind::LockInit ||
                     w.act.kind == ActKind::LockRelease;
    if (!available) return out; // held: disabled, not an error
    long long n = w.act.kind == ActKind::LockInit ? 1 : w.act.index + 1;
    Action b = proto;
    b.index = n;
    b.thread = t;
    Rat ts2 = w.ts + Rat(1);

    CompState lib2 = lib;
    CompState cli2 = cli;
    lib2.timelines[l][ts2] = b;
    lib2.cvd.insert(OpRef{l, w.ts});
    View tv = lib.tview.at(t);
    tv[l] = ts2;
    if (!relaxedAcquire) {
      const View &mv = mviewOf(lib, l, w.ts);
      tv = mergeViews(tv, mv);
      cli2.tview[t] = mergeViews(cli.tview.at(t), mv);
    }
    lib2.tview[t] = tv;
    lib2.mview[OpRef{l, ts2}] =
        unionViews(lib2.tview.at(t), cli2.tview.at(t));
    out.push_back({std::move(lib2), std::move(cli2), b});
    return out;
  }

  if (proto.kind == ActKind::LockRelease) {
    if (w.act.kind != ActKind::LockAcquire || w.act.thread != t)
      return out; // only the owner may release
    Action a = proto;
    a.index = w.act.index + 1;
    a.thread = t;
    Rat ts2 = w.ts + Rat(1);

    CompState lib2 = lib;
    lib2.timelines[l][ts2] = a;
    View tv = lib.tview.at(t);
    tv[l] = ts2;
    lib2.tview[t] = tv;
    lib2.mview[OpRef{l, ts2}] = unionViews(lib2.tview.at(t), cli.tview.at(t));
    out.push_back({std::move(lib2), cli, a});
    return out;
  }

  throw UsageError("lockStep: not a lock action");
}

std::vector<ObjSuccessor> queueStep(const CompState &lib, const CompState &cli,
                                    Tid t, const Action &proto) {
  std::vector<ObjSuccessor> out;
  const Location &q = proto.loc;
  if (!lib.hasLocation(q))
    throw UsageError("queueStep: unknown queue " + q.name);
  const auto &tl = lib.timelines.at(q);
  const auto &matched = lib.matchedOn(q);
  Rat front = lib.tview.at(t).at(q);

  auto matchedDom = [&](const Rat &ts) {
    for (const auto &[a, b] : matched)
      if (a == ts) return true;
    return false;
  };
  auto matchedSupp = [&](const Rat &ts) {
    for (const auto &[a, b] : matched)
      if (a == ts || b == ts) return true;
    return false;
  };

  if (proto.kind == ActKind::Enq) {
    for (const Rat &ts2 : insertionSlots(lib, q, front)) {
      bool ok = true;
      for (const auto &[ts, a] : tl) {
        if (!(ts > ts2)) continue;
        if (a.kind == ActKind::Enq && matchedDom(ts)) ok = false;
        if (a.kind == ActKind::Deq && a.rval.isEmpty()) ok = false;
      }
      if (!ok) continue;
      Action a = proto;
      a.thread = t;
      CompState lib2 = lib;
      lib2.timelines[q][ts2] = a;
      lib2.tview[t][q] = ts2;
      setOpMview(lib2, cli, t, q, ts2);
      out.push_back({std::move(lib2), cli, a});
    }
    return out;
  }

  if (proto.kind != ActKind::Deq)
    throw UsageError("queueStep: not a queue action");

  bool wantEmpty = proto.rval.isUndef() || proto.rval.isEmpty();
  bool wantValue = proto.rval.isUndef() || !proto.rval.isEmpty();

  // non-empty dequeue: match the first unmatched enqueue
  if (wantValue) {
    const std::pair<const Rat, Action> *cand = nullptr;
    bool earlierUnmatched = false;
    for (const auto &entry : tl) {
      if (entry.second.kind != ActKind::Enq) continue;
      if (matchedDom(entry.first)) continue;
      cand = &entry;
      break;
    }
    (void)earlierUnmatched;
    if (cand && (proto.rval.isUndef() || proto.rval == cand->second.wval)) {
      const Rat &ts = cand->first;
      const Action &w = cand->second;
      for (const Rat &ts2 : insertionSlots(lib, q, front)) {
        if (!(ts2 > ts)) continue;
        bool ok = true;
        for (const auto &[a, b] : matched)
          if (!(ts2 > b)) ok = false; // later than every matched dequeue
        if (!ok) continue;
        Action a = proto;
        a.rval = w.wval;
        a.thread = t;
        CompState lib2 = lib;
        CompState cli2 = cli;
        lib2.timelines[q][ts2] = a;
        lib2.tview[t][q] = ts2;
        lib2.matched[q].insert({ts, ts2});
        bool sync = modeAcquiring(proto.mode) && w.releasing();
        if (sync) {
          const View &mv = mviewOf(lib, q, ts);
          lib2.tview[t] = mergeViews(lib2.tview.at(t), mv);
          cli2.tview[t] = mergeViews(cli.tview.at(t), mv);
        }
        setOpMview(lib2, cli2, t, q, ts2);
        out.push_back({std::move(lib2), std::move(cli2), a});
      }
    }
  }

  // empty dequeue
  if (wantEmpty) {
    for (const Rat &ts2 : insertionSlots(lib, q, front)) {
      bool ok = true;
      for (const auto &[ts, a] : tl) {
        if (!(ts < ts2)) continue;
        if (!matchedSupp(ts) && !a.isEmptyMarker()) ok = false;
      }
      if (!ok) continue;
      Action a = proto;
      a.rval = Value::empty();
      a.thread = t;
      CompState lib2 = lib;
      lib2.timelines[q][ts2] = a;
      lib2.tview[t][q] = ts2;
      setOpMview(lib2, cli, t, q, ts2);
      out.push_back({std::move(lib2), cli, a});
    }
  }
  return out;
}

std::vector<ObjSuccessor> stackStep(const CompState &lib, const CompState &cli,
                                    Tid t, const Action &proto) {
  std::vector<ObjSuccessor> out;
  const Location &s = proto.loc;
  if (!lib.hasLocation(s))
    throw UsageError("stackStep: unknown stack " + s.name);
  const auto &tl = lib.timelines.at(s);
  const auto &matched = lib.matchedOn(s);
  Rat front = lib.tview.at(t).at(s);

  auto matchedDom = [&](const Rat &ts) {
    for (const auto &[a, b] : matched)
      if (a == ts) return true;
    return false;
  };
  auto matchedSupp = [&](const Rat &ts) {
    for (const auto &[a, b] : matched)
      if (a == ts || b == ts) return true;
    return false;
  };

  if (proto.kind == ActKind::Push) {
    for (const Rat &ts2 : insertionSlots(lib, s, front)) {
      if (insideMatchedInterval(lib, s, ts2)) continue;
      Action a = proto;
      a.thread = t;
      CompState lib2 = lib;
      lib2.timelines[s][ts2] = a;
      lib2.tview[t][s] = ts2;
      setOpMview(lib2, cli, t, s, ts2);
      out.push_back({std::move(lib2), cli, a});
    }
    return out;
  }

  if (proto.kind != ActKind::Pop)
    throw UsageError("stackStep: not a stack action");

  bool wantEmpty = proto.rval.isUndef() || proto.rval.isEmpty();
  bool wantValue = proto.rval.isUndef() || !proto.rval.isEmpty();

  if (wantValue) {
    // any unmatched push may be taken provided every unmatched push strictly
    // between it and the pop is matched
    for (const auto &[ts, w] : tl) {
      if (w.kind != ActKind::Push || matchedDom(ts)) continue;
      if (!(proto.rval.isUndef() || proto.rval == w.wval)) continue;
      for (const Rat &ts2 : insertionSlots(lib, s, front)) {
        if (!(ts < ts2)) continue;
        if (insideMatchedInterval(lib, s, ts2)) continue;
        bool ok = true;
        for (const auto &[tsB, wB] : tl) {
          if (wB.kind != ActKind::Push) continue;
          if (ts < tsB && tsB < ts2 && !matchedDom(tsB)) ok = false;
        }
        if (!ok) continue;
        Action a = proto;
        a.rval = w.wval;
        a.thread = t;
        CompState lib2 = lib;
        CompState cli2 = cli;
        lib2.timelines[s][ts2] = a;
        lib2.tview[t][s] = ts2;
        lib2.matched[s].insert({ts, ts2});
        bool sync = modeAcquiring(proto.mode) && w.releasing();
        if (sync) {
          const View &mv = mviewOf(lib, s, ts);
          lib2.tview[t] = mergeViews(lib2.tview.at(t), mv);
          cli2.tview[t] = mergeViews(cli.tview.at(t), mv);
        }
        setOpMview(lib2, cli2, t, s, ts2);
        out.push_back({std::move(lib2), std::move(cli2), a});
      }
    }
  }

  if (wantEmpty) {
    for (const Rat &ts2 : insertionSlots(lib, s, front)) {
      bool ok = true;
      for (const auto &[ts, a] : tl) {
        if (!(ts < ts2)) continue;
        if (!matchedSupp(ts) && !a.isEmptyMarker()) ok = false;
      }
      if (!ok) continue;
      Action a = proto;
      a.rval = Value::empty();
      a.thread = t;
      CompState lib2 = lib;
      lib2.timelines[s][ts2] = a;
      lib2.tview[t][s] = ts2;
      setOpMview(lib2, cli, t, s, ts2);
      out.push_back({std::move(lib2), cli, a});
    }
  }
  return out;
}

bool fifoHolds(const CompState &lib, const Location &q) {
  // dequeues ordered by dequeue timestamp must carry the values of their
  // enqueues ordered by enqueue timestamp
  std::vector<std::pair<Rat, Rat>> pairs(lib.matchedOn(q).begin(),
                                         lib.matchedOn(q).end());
  std::vector<std::pair<Rat, Value>> byEnq, byDeq;
  for (const auto &[enq, deq] : pairs) {
    const Action *w = lib.opAt(q, enq);
    if (!w) return false;
    byEnq.push_back({enq, w->wval});
    byDeq.push_back({deq, w->wval});
  }
  std::sort(byEnq.begin(), byEnq.end());
  std::sort(byDeq.begin(), byDeq.end());
  for (size_t i = 0; i < byEnq.size(); ++i)
    if (!(byEnq[i].second == byDeq[i].second)) return false;
  return true;
}

bool lifoHolds(const CompState &lib, const Location &s) {
  const auto &m = lib.matchedOn(s);
  for (const auto &p : m)
    for (const auto &r : m) {
      if (p == r) continue;
      // partial overlap p.first < r.first < p.second < r.second is illegal
      if (p.first < r.first && r.first < p.second && p.second < r.second)
        return false;
    }
  return true;
}

} // namespace rarcheck
