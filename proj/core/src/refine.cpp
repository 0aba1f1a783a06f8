#include "rarcheck/refine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace rarcheck {

// ---------------------------------------------------------------------------
// Snapshots

ClientSnapshot projectSnapshot(const Config &cfg) {
  ClientSnapshot s;
  for (const auto &[t, env] : cfg.locals) {
    std::map<std::string, Value> keep;
    for (const auto &[name, v] : env)
      if (name.find('.') == std::string::npos) keep[name] = v;
    s.locals[t] = std::move(keep);
  }
  s.client = cfg.client;
  // drop cross-component entries from modification views: their ranks
  // depend on the library history and they are invisible to the client
  for (auto &[ref, view] : s.client.mview) {
    for (auto it = view.begin(); it != view.end();)
      it = it->first.isClient() ? std::next(it) : view.erase(it);
  }
  return s;
}

std::string snapshotKey(const ClientSnapshot &s) {
  std::ostringstream os;
  for (const auto &[t, env] : s.locals) {
    os << t << "{";
    for (const auto &[r, v] : env) os << r << "=" << v.str() << ",";
    os << "}";
  }
  os << compStateKey(s.client);
  return os.str();
}

std::vector<ClientSnapshot>
projectClientTrace(const std::vector<Config> &execution) {
  std::vector<ClientSnapshot> out;
  out.reserve(execution.size());
  for (const auto &cfg : execution) out.push_back(projectSnapshot(cfg));
  return out;
}

std::vector<ClientSnapshot>
removeStutter(const std::vector<ClientSnapshot> &tr) {
  std::vector<ClientSnapshot> out;
  for (const auto &s : tr)
    if (out.empty() || !(out.back() == s)) out.push_back(s);
  return out;
}

namespace {

using ObsSet = std::set<std::pair<std::string, std::string>>; // action, rank

ObsSet obsSet(const CompState &s, Tid t, const Location &x) {
  ObsSet out;
  for (const auto &w : observable(s, t, x))
    out.insert({w.act.str(), w.ts.str()});
  return out;
}

} // namespace

bool stateRefines(const ClientSnapshot &abs, const ClientSnapshot &conc) {
  if (abs.locals != conc.locals) return false;
  // same location/thread vocabulary
  {
    auto locsOf = [](const ClientSnapshot &s) {
      std::vector<Location> out;
      for (const auto &[x, tl] : s.client.timelines) out.push_back(x);
      return out;
    };
    if (locsOf(abs) != locsOf(conc))
      throw UsageError("stateRefines: vocabulary mismatch");
  }
  // covered sets equal (as timestamped ops, rank-compared)
  if (abs.client.cvd != conc.client.cvd) return false;
  // observable inclusion: concrete within abstract
  for (const auto &[t, view] : conc.client.tview) {
    for (const auto &[x, tl] : conc.client.timelines) {
      ObsSet c = obsSet(conc.client, t, x);
      ObsSet a = obsSet(abs.client, t, x);
      if (!std::includes(a.begin(), a.end(), c.begin(), c.end()))
        return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Shared machinery for the two game checkers.

namespace {

struct Graphs {
  ExecProgram absProg, concProg;
  Exploration abs, conc;
  std::vector<ClientSnapshot> absSnap, concSnap;
  std::vector<std::string> absSnapKey, concSnapKey;

  // stateRefines memo keyed by snapshot identity
  mutable std::map<std::pair<int, int>, bool> refinesMemo;

  bool refines(int absIdx, int concIdx) const {
    auto key = std::make_pair(absIdx, concIdx);
    auto it = refinesMemo.find(key);
    if (it != refinesMemo.end()) return it->second;
    bool r = stateRefines(absSnap[absIdx], concSnap[concIdx]);
    refinesMemo.emplace(key, r);
    return r;
  }
};

Graphs buildGraphs(const ProgramSpec &client, const std::string &abstractKind,
                   const std::string &concreteKind, const Bounds &b) {
  ProgramSpec base = stripAcquireBinders(client);
  Graphs g;
  g.absProg = elaborate(withObjectKind(base, abstractKind));
  g.concProg = elaborate(withObjectKind(base, concreteKind));
  g.abs = explore(g.absProg, b);
  g.conc = explore(g.concProg, b);
  for (const auto &cfg : g.abs.configs) {
    g.absSnap.push_back(projectSnapshot(cfg));
    g.absSnapKey.push_back(snapshotKey(g.absSnap.back()));
  }
  for (const auto &cfg : g.conc.configs) {
    g.concSnap.push_back(projectSnapshot(cfg));
    g.concSnapKey.push_back(snapshotKey(g.concSnap.back()));
  }
  return g;
}

} // namespace

// ---------------------------------------------------------------------------
// Trace refinement: determinised stutter-closed matching game.

RefinementResult checkRefinement(const ProgramSpec &client,
                                 const std::string &abstractKind,
                                 const std::string &concreteKind,
                                 const Bounds &b) {
  Graphs g = buildGraphs(client, abstractKind, concreteKind, b);
  RefinementResult res;
  res.truncated = !g.abs.truncated.empty() || !g.conc.truncated.empty();

  // abstract stutter closure: nodes reachable via snapshot-preserving edges
  std::map<std::vector<int>, std::vector<int>> closureMemo;
  auto closure = [&](const std::vector<int> &nodes) {
    auto it = closureMemo.find(nodes);
    if (it != closureMemo.end()) return it->second;
    std::set<int> seen(nodes.begin(), nodes.end());
    std::deque<int> q(nodes.begin(), nodes.end());
    while (!q.empty()) {
      int n = q.front();
      q.pop_front();
      for (int ei : g.abs.out[n]) {
        const Edge &e = g.abs.edges[ei];
        if (g.absSnapKey[e.dst] != g.absSnapKey[n]) continue;
        if (seen.insert(e.dst).second) q.push_back(e.dst);
      }
    }
    std::vector<int> out(seen.begin(), seen.end());
    closureMemo.emplace(nodes, out);
    return out;
  };

  // pair states: (concrete node, matched abstract frontier)
  std::map<std::vector<int>, int> setIds;
  std::vector<std::vector<int>> sets;
  auto internSet = [&](std::vector<int> v) {
    auto [it, fresh] = setIds.try_emplace(v, (int)sets.size());
    if (fresh) sets.push_back(std::move(v));
    return it->second;
  };

  struct Pair {
    int conc;
    int setId;
    int parent;   // pair index
    int viaEdge;  // concrete edge index
  };
  std::vector<Pair> pairs;
  std::map<std::pair<int, int>, int> seenPair;

  if (!g.refines(0, 0)) {
    res.pass = false;
    res.cex = RefinementCounterexample{
        {0}, {g.concSnapKey[0]}, 0, {g.absSnapKey[0]}};
    return res;
  }

  int initSet = internSet({0});
  pairs.push_back({0, initSet, -1, -1});
  seenPair[{0, initSet}] = 0;
  std::deque<int> work{0};

  auto buildCex = [&](int pairIdx, int failEdge) {
    RefinementCounterexample cex;
    std::vector<int> rpath;
    std::vector<int> redges;
    for (int p = pairIdx; p >= 0; p = pairs[p].parent) {
      rpath.push_back(pairs[p].conc);
      if (pairs[p].viaEdge >= 0) redges.push_back(pairs[p].viaEdge);
    }
    std::reverse(rpath.begin(), rpath.end());
    cex.concretePath = rpath;
    cex.concretePath.push_back(g.conc.edges[failEdge].dst);
    std::vector<std::string> trace;
    for (int n : cex.concretePath) {
      if (trace.empty() || trace.back() != g.concSnapKey[n])
        trace.push_back(g.concSnapKey[n]);
    }
    cex.trace = trace;
    cex.failingIndex = static_cast<int>(trace.size()) - 1;
    for (int a : closure(sets[pairs[pairIdx].setId]))
      cex.frontier.push_back(g.absSnapKey[a]);
    std::sort(cex.frontier.begin(), cex.frontier.end());
    cex.frontier.erase(std::unique(cex.frontier.begin(), cex.frontier.end()),
                       cex.frontier.end());
    return cex;
  };

  while (!work.empty()) {
    int pi = work.front();
    work.pop_front();
    int c = pairs[pi].conc;
    int sid = pairs[pi].setId;
    for (int ei : g.conc.out[c]) {
      const Edge &e = g.conc.edges[ei];
      int c2 = e.dst;
      int sid2;
      if (g.concSnapKey[c2] == g.concSnapKey[c]) {
        sid2 = sid; // client stutter
      } else {
        std::vector<int> next;
        for (int a1 : closure(sets[sid])) {
          for (int aei : g.abs.out[a1]) {
            const Edge &ae = g.abs.edges[aei];
            if (g.absSnapKey[ae.dst] == g.absSnapKey[a1]) continue;
            if (!g.refines(ae.dst, c2)) continue;
            next.push_back(ae.dst);
          }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.empty()) {
          res.pass = false;
          res.cex = buildCex(pi, ei);
          res.exploredPairs = static_cast<long long>(pairs.size());
          return res;
        }
        sid2 = internSet(std::move(next));
      }
      auto key = std::make_pair(c2, sid2);
      if (seenPair.count(key)) continue;
      int idx = static_cast<int>(pairs.size());
      seenPair[key] = idx;
      pairs.push_back({c2, sid2, pi, ei});
      work.push_back(idx);
    }
  }
  res.exploredPairs = static_cast<long long>(pairs.size());
  return res;
}

bool replayCounterexample(const ProgramSpec &client,
                          const std::string &concreteKind, const Bounds &b,
                          const RefinementCounterexample &cex) {
  ProgramSpec base = stripAcquireBinders(client);
  ExecProgram prog = elaborate(withObjectKind(base, concreteKind));
  Exploration ex = explore(prog, b);
  std::vector<std::string> snapKeys;
  for (const auto &cfg : ex.configs)
    snapKeys.push_back(snapshotKey(projectSnapshot(cfg)));

  if (cex.concretePath.empty() || cex.concretePath.front() != 0) return false;
  for (size_t i = 0; i + 1 < cex.concretePath.size(); ++i) {
    int a = cex.concretePath[i];
    int b2 = cex.concretePath[i + 1];
    bool found = false;
    if (a < 0 || a >= (int)ex.out.size()) return false;
    for (int ei : ex.out[a])
      if (ex.edges[ei].dst == b2) found = true;
    if (!found) return false;
  }
  std::vector<std::string> trace;
  for (int n : cex.concretePath) {
    if (n < 0 || n >= (int)snapKeys.size()) return false;
    if (trace.empty() || trace.back() != snapKeys[n])
      trace.push_back(snapKeys[n]);
  }
  return trace == cex.trace;
}

// ---------------------------------------------------------------------------
// Forward simulation with built-in relations.

namespace {

bool sameStatePart(const Config &a, const Config &b) {
  return a.locals == b.locals && a.client == b.client && a.lib == b.lib &&
         a.usedAddr == b.usedAddr && a.pushedAddr == b.pushedAddr;
}

/// Def-6.4(1) client observation: client locals (with rval) agree and each
/// thread observes in the concrete at most what it observes in the abstract.
bool clientObservation(const Graphs &g, int absIdx, int concIdx) {
  const ClientSnapshot &a = g.absSnap[absIdx];
  const ClientSnapshot &c = g.concSnap[concIdx];
  if (a.locals != c.locals) return false;
  for (const auto &[t, view] : c.client.tview)
    for (const auto &[x, tl] : c.client.timelines) {
      ObsSet cs = obsSet(c.client, t, x);
      ObsSet as = obsSet(a.client, t, x);
      if (!std::includes(as.begin(), as.end(), cs.begin(), cs.end()))
        return false;
    }
  return true;
}

long long lockOpValue(const Action &a) {
  switch (a.kind) {
  case ActKind::LockInit: return 0;
  case ActKind::LockAcquire:
  case ActKind::LockRelease: return a.index;
  default: return a.isWriteLike() && a.wval.isInt() ? a.wval.i : -1;
  }
}

View clientRestrict(const View &v) {
  View out;
  for (const auto &[x, ts] : v)
    if (x.isClient()) out[x] = ts;
  return out;
}

/// (A.2): concrete client views at least as advanced as abstract, covered
/// sets and client op sets equal.
bool clientViewRel(const Config &abs, const Config &conc) {
  if (!(abs.client.timelines == conc.client.timelines)) return false;
  if (!(abs.client.cvd == conc.client.cvd)) return false;
  for (const auto &[t, cv] : conc.client.tview) {
    auto av = abs.client.tview.find(t);
    if (av == abs.client.tview.end()) return false;
    for (const auto &[x, ts] : cv) {
      auto it = av->second.find(x);
      if (it == av->second.end() || !(it->second <= ts)) return false;
    }
  }
  return true;
}

/// (A.3): every observable concrete lock-variable write corresponds to an
/// observable abstract lock op with the same value, synchronisation
/// capability, cover status and client-restricted modification view.
bool seqlockRel(const ExecProgram &absProg, const Config &abs,
                const ExecProgram &concProg, const Config &conc,
                const std::string &concVar) {
  if (!clientViewRel(abs, conc)) return false;
  Location glb = concProg.locs.at(concVar);
  Location l;
  for (const auto &[name, info] : absProg.objects) l = absProg.locs.at(name);
  for (const auto &[t, view] : conc.lib.tview) {
    for (const auto &wc : observable(conc.lib, t, glb)) {
      bool found = false;
      for (const auto &wa : observable(abs.lib, t, l)) {
        if (lockOpValue(wc.act) != lockOpValue(wa.act)) continue;
        if (wc.act.releasing() != wa.act.releasing()) continue;
        if (conc.lib.covered(glb, wc.ts) != abs.lib.covered(l, wa.ts))
          continue;
        auto mc = conc.lib.mview.find(OpRef{glb, wc.ts});
        auto ma = abs.lib.mview.find(OpRef{l, wa.ts});
        View vc = mc == conc.lib.mview.end() ? View{} : clientRestrict(mc->second);
        View va = ma == abs.lib.mview.end() ? View{} : clientRestrict(ma->second);
        if (!(vc == va)) continue;
        found = true;
        break;
      }
      if (!found) return false;
    }
  }
  return true;
}

bool insideMethod(const Cmd &c, const std::string &method) {
  if (!c) return false;
  switch (c->tag) {
  case CmdTag::Inlined:
    if (c->method == method) return true;
    return insideMethod(c->c1, method);
  case CmdTag::Seq:
    return insideMethod(c->c1, method) || insideMethod(c->c2, method);
  default:
    return false;
  }
}

/// (A.4): while a thread is inside Acquire, any serving-now write it can
/// observe whose value equals some issued ticket is backed by an available
/// (even, uncovered) abstract lock op with the matching view transfer.
bool ticketRel(const ExecProgram &absProg, const Config &abs,
               const ExecProgram &concProg, const Config &conc) {
  if (!clientViewRel(abs, conc)) return false;
  Location nt = concProg.locs.at("nt");
  Location sn = concProg.locs.at("sn");
  Location l;
  for (const auto &[name, info] : absProg.objects) l = absProg.locs.at(name);

  for (const auto &[t, st] : conc.threads) {
    if (!insideMethod(st.cur, "acquire")) continue;
    for (const auto &[tsNt, wnt] : conc.lib.timelines.at(nt)) {
      for (const auto &wsn : observable(conc.lib, t, sn)) {
        if (!(wnt.writtenValue() == wsn.act.writtenValue())) continue;
        bool found = false;
        for (const auto &wl : observable(abs.lib, t, l)) {
          long long v = lockOpValue(wl.act);
          if (v % 2 != 0) continue;
          if (abs.lib.covered(l, wl.ts)) continue;
          if (wsn.act.releasing() != wl.act.releasing()) continue;
          auto mc = conc.lib.mview.find(OpRef{sn, wsn.ts});
          auto ma = abs.lib.mview.find(OpRef{l, wl.ts});
          View vc =
              mc == conc.lib.mview.end() ? View{} : clientRestrict(mc->second);
          View va =
              ma == abs.lib.mview.end() ? View{} : clientRestrict(ma->second);
          if (!(vc == va)) continue;
          found = true;
          break;
        }
        if (!found) return false;
      }
    }
  }
  return true;
}

std::map<long long, OpRef> buildTreiberMap(const Config &abs,
                                           const ExecProgram &absProg,
                                           const Config &conc,
                                           const ExecProgram &concProg);

} // namespace

std::vector<Violation> treiberInvariants(const Config &cfg,
                                         const ExecProgram &prog) {
  std::vector<Violation> out;
  auto locIt = prog.locs.find("Top");
  if (locIt == prog.locs.end())
    throw UsageError("treiberInvariants: not a Treiber model state");
  Location top = locIt->second;

  auto lastVal = [&](long long addr) -> std::optional<long long> {
    auto it = prog.locs.find(std::to_string(addr));
    if (it == prog.locs.end()) return std::nullopt;
    const Action *a = nullptr;
    const auto &tl = cfg.lib.timelines.at(it->second);
    a = &tl.rbegin()->second;
    Value v = a->writtenValue();
    if (!v.isInt()) return std::nullopt;
    return v.i;
  };
  long long topVal = lastOp(cfg.lib, top).act.writtenValue().i;

  // (1) pushed addresses form a null-terminated chain from Top
  {
    std::set<long long> visited;
    long long cur = topVal;
    bool ok = true;
    while (cur != 0) {
      if (!cfg.pushedAddr.count(cur) || visited.count(cur)) {
        ok = false;
        break;
      }
      visited.insert(cur);
      auto nxt = lastVal(cur + 1);
      if (!nxt) {
        ok = false;
        break;
      }
      cur = *nxt;
    }
    if (!ok || visited != cfg.pushedAddr)
      out.push_back({"(1)", "pushed addresses are not a total order from Top"});
  }
  // (2) non-initial Top writes are releasing with used-address values
  for (const auto &[ts, a] : cfg.lib.timelines.at(top)) {
    if (ts == Rat(0)) continue;
    if (!a.releasing())
      out.push_back({"(2)", "non-releasing write to Top: " + a.str()});
    long long v = a.writtenValue().isInt() ? a.writtenValue().i : -1;
    if (v != 0 && !cfg.usedAddr.count(v))
      out.push_back({"(2)", "Top value outside usedAddr: " + a.str()});
  }
  // (3) last Top value is pushed
  if (topVal != 0 && !cfg.pushedAddr.count(topVal))
    out.push_back({"(3)", "lastVal(Top) not in pushedAddr"});
  // (4)
  for (long long a : cfg.pushedAddr)
    if (!cfg.usedAddr.count(a))
      out.push_back({"(4)", "pushed address " + std::to_string(a) +
                                " not in usedAddr"});
  // (5) next pointers of distinct pushed addresses differ
  {
    std::map<long long, long long> nxt;
    for (long long a : cfg.pushedAddr) {
      auto v = lastVal(a + 1);
      if (!v) continue;
      auto [it, fresh] = nxt.emplace(*v, a);
      if (!fresh && *v != 0)
        out.push_back({"(5)", "addresses " + std::to_string(it->second) +
                                  " and " + std::to_string(a) +
                                  " share next pointer"});
    }
  }
  // (6) non-null next pointers of pushed addresses are pushed
  for (long long a : cfg.pushedAddr) {
    auto v = lastVal(a + 1);
    if (v && *v != 0 && !cfg.pushedAddr.count(*v))
      out.push_back({"(6)", "next of " + std::to_string(a) +
                                " is not a pushed address"});
  }
  return out;
}

std::vector<Violation> rtsConditions(const std::map<long long, OpRef> &f,
                                     const Config &abs, const Config &conc,
                                     const ExecProgram &absProg,
                                     const ExecProgram &concProg) {
  std::vector<Violation> out;
  Location absStack;
  for (const auto &[name, info] : absProg.objects)
    absStack = absProg.locs.at(name);
  const auto &matched = abs.lib.matchedOn(absStack);
  auto unmatchedPush = [&](const OpRef &r) {
    const Action *a = abs.lib.opAt(r.loc, r.ts);
    if (!a || a->kind != ActKind::Push) return false;
    for (const auto &[x, y] : matched)
      if (x == r.ts) return false;
    return true;
  };

  // (7) injectivity and the null anchor
  {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto &[a, r] : f)
      if (!seen.insert({r.loc.name, r.ts.str()}).second)
        out.push_back({"(7)", "f is not injective"});
    auto nullIt = f.find(0);
    if (nullIt == f.end()) {
      out.push_back({"(7)", "f(null) missing"});
    } else {
      const Action *a = abs.lib.opAt(nullIt->second.loc, nullIt->second.ts);
      if (!a || !a->isEmptyMarker())
        out.push_back({"(7)", "f(null) is not an empty-pop anchor"});
    }
  }

  auto lastVal = [&](long long addr) -> long long {
    auto it = concProg.locs.find(std::to_string(addr));
    if (it == concProg.locs.end()) return -1;
    return lastOp(conc.lib, it->second).act.writtenValue().i;
  };

  // (8) value agreement and next-pointer ordering
  for (long long a : conc.pushedAddr) {
    auto it = f.find(a);
    if (it == f.end()) {
      out.push_back({"(8)", "f undefined on pushed address " +
                                std::to_string(a)});
      continue;
    }
    const Action *pa = abs.lib.opAt(it->second.loc, it->second.ts);
    if (!pa || !unmatchedPush(it->second)) {
      out.push_back({"(8)", "f(" + std::to_string(a) +
                                ") is not an unmatched push"});
      continue;
    }
    if (!(pa->wval == Value::integer(lastVal(a))))
      out.push_back({"(8)", "value disagreement at " + std::to_string(a)});
    auto nx = f.find(lastVal(a + 1));
    if (nx != f.end() && !(nx->second.ts < it->second.ts))
      out.push_back({"(8)", "push order violated at " + std::to_string(a)});
  }

  // (9) no unmatched push squeezed between f(next(a)) and f(a)
  for (long long a : conc.pushedAddr) {
    auto fa = f.find(a);
    auto fn = f.find(lastVal(a + 1));
    if (fa == f.end() || fn == f.end()) continue;
    for (const auto &[ts, act] : abs.lib.timelines.at(absStack)) {
      OpRef op{absStack, ts};
      if (!unmatchedPush(op)) continue;
      if (op == fa->second || op == fn->second) continue;
      if (!(ts < fn->second.ts || ts > fa->second.ts))
        out.push_back({"(9)", "interleaved unmatched push at rank " + ts.str()});
    }
  }

  // (10) Top maps to the last unmatched push
  {
    Location top = concProg.locs.at("Top");
    long long tv = lastOp(conc.lib, top).act.writtenValue().i;
    if (tv != 0) {
      std::optional<Rat> lastPush;
      for (const auto &[ts, act] : abs.lib.timelines.at(absStack))
        if (act.kind == ActKind::Push) lastPush = ts;
      auto it = f.find(tv);
      if (!lastPush || it == f.end() || !(it->second.ts == *lastPush) ||
          !unmatchedPush(OpRef{absStack, *lastPush}))
        out.push_back({"(10)", "f(lastVal(Top)) is not the last push"});
    }
  }

  // (11) the pusher's recorded client view is below its own current view
  for (long long a : conc.pushedAddr) {
    auto fa = f.find(a);
    if (fa == f.end()) continue;
    const Action *pa = abs.lib.opAt(fa->second.loc, fa->second.ts);
    auto mv = abs.lib.mview.find(fa->second);
    if (!pa || mv == abs.lib.mview.end()) continue;
    Tid pusher = pa->thread;
    auto tv = conc.client.tview.find(pusher);
    if (tv == conc.client.tview.end()) continue;
    for (const auto &[x, ts] : clientRestrict(mv->second)) {
      auto cur = tv->second.find(x);
      if (cur == tv->second.end() || !(ts <= cur->second))
        out.push_back({"(11)", "stale pusher view on " + x.name});
    }
  }

  // (12) abstract view transfer below the concrete Top write's
  for (long long a : conc.pushedAddr) {
    auto fa = f.find(a);
    if (fa == f.end()) continue;
    auto ma = abs.lib.mview.find(fa->second);
    if (ma == abs.lib.mview.end()) continue;
    Location top = concProg.locs.at("Top");
    for (const auto &[ts, w] : conc.lib.timelines.at(top)) {
      if (!(w.writtenValue() == Value::integer(a))) continue;
      auto mc = conc.lib.mview.find(OpRef{top, ts});
      if (mc == conc.lib.mview.end()) continue;
      for (const auto &[x, tsa] : clientRestrict(ma->second)) {
        auto it = mc->second.find(x);
        if (it == mc->second.end() || !(tsa <= it->second))
          out.push_back({"(12)", "view transfer gap on " + x.name});
      }
    }
  }

  // (13) abstract client views below concrete client views
  for (const auto &[t, cv] : conc.client.tview) {
    auto av = abs.client.tview.find(t);
    if (av == abs.client.tview.end()) continue;
    for (const auto &[x, ts] : cv) {
      auto it = av->second.find(x);
      if (it != av->second.end() && !(it->second <= ts))
        out.push_back({"(13)", "abstract view ahead on " + x.name});
    }
  }
  return out;
}

namespace {

/// Deterministic witness for the R_TS node map: each pushed address maps to
/// the unmatched abstract push with the same value (stack order breaking
/// ties); null anchors at the initial empty marker.
std::map<long long, OpRef> buildTreiberMap(const Config &abs,
                                           const ExecProgram &absProg,
                                           const Config &conc,
                                           const ExecProgram &concProg) {
  std::map<long long, OpRef> f;
  Location absStack;
  for (const auto &[name, info] : absProg.objects)
    absStack = absProg.locs.at(name);
  f[0] = OpRef{absStack, Rat(0)};

  auto lastVal = [&](long long addr) -> long long {
    auto it = concProg.locs.find(std::to_string(addr));
    if (it == concProg.locs.end()) return -1;
    return lastOp(conc.lib, it->second).act.writtenValue().i;
  };

  const auto &matched = abs.lib.matchedOn(absStack);
  std::vector<std::pair<Rat, Value>> unmatched;
  for (const auto &[ts, act] : abs.lib.timelines.at(absStack)) {
    if (act.kind != ActKind::Push) continue;
    bool m = false;
    for (const auto &[x, y] : matched)
      if (x == ts) m = true;
    if (!m) unmatched.push_back({ts, act.wval});
  }

  // walk the concrete chain from Top: deepest node pairs with the earliest
  // unmatched push of its value
  std::vector<long long> chain;
  Location top = concProg.locs.at("Top");
  long long cur = lastOp(conc.lib, top).act.writtenValue().i;
  std::set<long long> guard;
  while (cur != 0 && conc.pushedAddr.count(cur) && guard.insert(cur).second) {
    chain.push_back(cur);
    cur = lastVal(cur + 1);
  }
  std::reverse(chain.begin(), chain.end()); // bottom of stack first
  std::set<std::string> taken;
  for (long long a : chain) {
    long long v = lastVal(a);
    for (const auto &[ts, val] : unmatched) {
      if (!(val == Value::integer(v))) continue;
      if (!taken.insert(ts.str()).second) continue;
      f[a] = OpRef{absStack, ts};
      break;
    }
  }
  return f;
}

} // namespace

SimulationReport checkSimulation(const std::string &relation,
                                 const ProgramSpec &client,
                                 const std::string &abstractKind,
                                 const std::string &concreteKind,
                                 const Bounds &b) {
  Graphs g = buildGraphs(client, abstractKind, concreteKind, b);
  SimulationReport rep;

  std::function<bool(int, int)> rel;
  if (relation == "client-obs") {
    rel = [&](int a, int c) {
      return clientViewRel(g.abs.configs[a], g.conc.configs[c]);
    };
  } else if (relation == "seqlock") {
    rel = [&](int a, int c) {
      return seqlockRel(g.absProg, g.abs.configs[a], g.concProg,
                        g.conc.configs[c], "glb");
    };
  } else if (relation == "ticketlock") {
    rel = [&](int a, int c) {
      return ticketRel(g.absProg, g.abs.configs[a], g.concProg,
                       g.conc.configs[c]);
    };
  } else if (relation == "treiber-rts") {
    rel = [&](int a, int c) {
      auto f = buildTreiberMap(g.abs.configs[a], g.absProg, g.conc.configs[c],
                               g.concProg);
      return rtsConditions(f, g.abs.configs[a], g.conc.configs[c], g.absProg,
                           g.concProg)
          .empty();
    };
  } else {
    throw UsageError("unknown simulation relation " + relation);
  }

  std::map<std::pair<int, int>, bool> relMemo;
  auto relOf = [&](int a, int c) {
    auto key = std::make_pair(a, c);
    auto it = relMemo.find(key);
    if (it != relMemo.end()) return it->second;
    bool r = rel(a, c);
    relMemo.emplace(key, r);
    return r;
  };

  // free abstract moves: state-preserving steps
  std::vector<std::vector<int>> freeClosure(g.abs.configs.size());
  std::vector<bool> closed(g.abs.configs.size(), false);
  std::function<const std::vector<int> &(int)> closureOf = [&](int n)
      -> const std::vector<int> & {
    if (closed[n]) return freeClosure[n];
    std::set<int> seen{n};
    std::deque<int> q{n};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int ei : g.abs.out[x]) {
        const Edge &e = g.abs.edges[ei];
        if (!sameStatePart(g.abs.configs[x], g.abs.configs[e.dst])) continue;
        if (seen.insert(e.dst).second) q.push_back(e.dst);
      }
    }
    freeClosure[n] = std::vector<int>(seen.begin(), seen.end());
    closed[n] = true;
    return freeClosure[n];
  };

  // responses to a concrete move ending in c2 from abstract position a
  auto responses = [&](int a, int c2) {
    std::vector<int> out;
    for (int a1 : closureOf(a)) {
      if (relOf(a1, c2)) out.push_back(a1); // stutter
      for (int ei : g.abs.out[a1]) {
        int b1 = g.abs.edges[ei].dst;
        for (int b2 : closureOf(b1))
          if (relOf(b2, c2)) out.push_back(b2);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  // (2) initialisation
  if (!relOf(0, 0)) {
    rep.pass = false;
    rep.obligations.push_back({"initialisation", false,
                               "relation fails on the initial states"});
    return rep;
  }
  rep.obligations.push_back({"initialisation", true, ""});

  // discover the optimistic pair graph
  struct PairInfo {
    int a, c;
    // per concrete edge: candidate response pairs (indices into `pairs`)
    std::vector<std::vector<int>> succ;
    std::vector<int> concEdges;
  };
  std::vector<PairInfo> pairs;
  std::map<std::pair<int, int>, int> idOf;
  std::deque<int> work;
  auto pairId = [&](int a, int c) {
    auto key = std::make_pair(a, c);
    auto it = idOf.find(key);
    if (it != idOf.end()) return it->second;
    int id = static_cast<int>(pairs.size());
    idOf.emplace(key, id);
    pairs.push_back({a, c, {}, {}});
    work.push_back(id);
    return id;
  };
  pairId(0, 0);

  bool clientObsOk = true;
  std::string clientObsWitness;

  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    int a = pairs[id].a;
    int c = pairs[id].c;
    if (clientObsOk && !clientObservation(g, a, c)) {
      clientObsOk = false;
      clientObsWitness = "pair (abs " + std::to_string(a) + ", conc " +
                         std::to_string(c) + ")";
    }
    for (int ei : g.conc.out[c]) {
      int c2 = g.conc.edges[ei].dst;
      std::vector<int> resp;
      for (int b2 : responses(a, c2)) resp.push_back(pairId(b2, c2));
      pairs[id].concEdges.push_back(ei);
      pairs[id].succ.push_back(std::move(resp));
    }
  }
  rep.pairs = static_cast<long long>(pairs.size());
  rep.obligations.push_back(
      {"client-observation", clientObsOk, clientObsWitness});
  if (!clientObsOk) rep.pass = false;

  // greatest fixpoint: prune pairs with an unanswerable concrete move
  std::vector<bool> good(pairs.size(), true);
  bool changed = true;
  std::string stepWitness;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (!good[i]) continue;
      for (size_t k = 0; k < pairs[i].succ.size(); ++k) {
        bool ok = false;
        for (int s : pairs[i].succ[k])
          if (good[s]) ok = true;
        if (!ok) {
          good[i] = false;
          changed = true;
          if (stepWitness.empty())
            stepWitness = "pair (abs " + std::to_string(pairs[i].a) +
                          ", conc " + std::to_string(pairs[i].c) +
                          ") cannot answer edge " +
                          std::to_string(pairs[i].concEdges[k]);
          break;
        }
      }
    }
  }
  bool stepOk = good[0];
  rep.obligations.push_back({"step", stepOk, stepOk ? "" : stepWitness});
  if (!stepOk) rep.pass = false;
  return rep;
}

} // namespace rarcheck
