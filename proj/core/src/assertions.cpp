#include "rarcheck/assertions.hpp"

#include <algorithm>

namespace rarcheck {

namespace {

const CompState &componentOf(const Config &cfg, char comp) {
  return comp == 'L' ? cfg.lib : cfg.client;
}

std::optional<Rat> firstUnmatched(const CompState &s, const Location &o,
                                  ActKind addKind) {
  const auto &m = s.matchedOn(o);
  auto matchedDom = [&](const Rat &ts) {
    for (const auto &[a, b] : m)
      if (a == ts) return true;
    return false;
  };
  for (const auto &[ts, a] : s.timelines.at(o))
    if (a.kind == addKind && !matchedDom(ts)) return ts;
  return std::nullopt;
}

std::optional<Rat> greatestUnmatched(const CompState &s, const Location &o,
                                     ActKind addKind) {
  const auto &m = s.matchedOn(o);
  auto matchedDom = [&](const Rat &ts) {
    for (const auto &[a, b] : m)
      if (a == ts) return true;
    return false;
  };
  std::optional<Rat> out;
  for (const auto &[ts, a] : s.timelines.at(o))
    if (a.kind == addKind && !matchedDom(ts)) out = ts;
  return out;
}

/// Definite observation of a view against a write set: the view points at
/// the last write to y and that write has value v.
bool dview(const View &view, const CompState &target, const Location &y,
           const Value &v) {
  auto it = view.find(y);
  if (it == view.end()) return false;
  auto tl = target.timelines.find(y);
  if (tl == target.timelines.end() || tl->second.empty()) return false;
  const auto &last = *tl->second.rbegin();
  return it->second == last.first && last.second.writtenValue() == v;
}

struct MethCtx {
  const ExecProgram &prog;
  const Config &cfg;
};

Location objLoc(const MethCtx &mc, const std::string &obj) {
  auto it = mc.prog.locs.find(obj);
  if (it == mc.prog.locs.end()) throw UsageError("unknown object " + obj);
  return it->second;
}

/// Whether op `a` literally matches the pattern (lock ops by index,
/// push/enq/deq/pop by value).
bool literalMatch(const MethodPat &m, const Action &a) {
  if (m.method == "init")
    return a.isInitMarker();
  if (m.method == "acquire")
    return a.kind == ActKind::LockAcquire &&
           (!m.hasArg || a.index == m.arg.i);
  if (m.method == "release")
    return a.kind == ActKind::LockRelease &&
           (!m.hasArg || a.index == m.arg.i);
  if (m.method == "push")
    return a.kind == ActKind::Push && (!m.hasArg || a.wval == m.arg);
  if (m.method == "enq")
    return a.kind == ActKind::Enq && (!m.hasArg || a.wval == m.arg);
  if (m.method == "pop")
    return a.kind == ActKind::Pop && (!m.hasArg || a.rval == m.arg);
  if (m.method == "deq")
    return a.kind == ActKind::Deq && (!m.hasArg || a.rval == m.arg);
  throw UsageError("unknown method pattern " + m.method);
}

/// The observable "sources" an o.m(v) observation quantifies over: for lock
/// ops the ops themselves; for pop(v)/deq(v) the unmatched push/enq ops that
/// could produce result v; for pop(empty)/deq(empty) the empty markers.
std::vector<TimestampedOp> methodSources(const MethCtx &mc, const CompState &s,
                                         Tid t, const MethodPat &m) {
  Location o = objLoc(mc, m.obj);
  auto tl = s.timelines.find(o);
  if (tl == s.timelines.end()) throw UsageError("no ops on object " + m.obj);
  auto vf = s.viewfront(t, o);
  if (!vf) throw UsageError("no viewfront for " + m.obj);
  const auto &matches = s.matchedOn(o);
  auto matchedDom = [&](const Rat &ts) {
    for (const auto &[a, b] : matches)
      if (a == ts) return true;
    return false;
  };

  bool popLike = m.method == "pop" || m.method == "deq";
  ActKind addKind = m.method == "pop" ? ActKind::Push : ActKind::Enq;

  std::vector<TimestampedOp> out;
  for (auto it = tl->second.lower_bound(*vf); it != tl->second.end(); ++it) {
    const Action &a = it->second;
    if (popLike) {
      if (m.hasArg && m.arg.isEmpty()) {
        if (a.isEmptyMarker()) out.push_back({a, it->first});
      } else {
        if (a.kind == addKind && !matchedDom(it->first) &&
            (!m.hasArg || a.wval == m.arg))
          out.push_back({a, it->first});
      }
    } else if (literalMatch(m, a)) {
      out.push_back({a, it->first});
    }
  }
  return out;
}

/// [o.m]_t: viewfront at the object's maximal timestamp, and the method
/// observation certified there.
bool definiteMethod(const MethCtx &mc, const CompState &s, Tid t,
                    const MethodPat &m) {
  Location o = objLoc(mc, m.obj);
  auto mx = s.maxTS(o);
  auto vf = s.viewfront(t, o);
  if (!mx || !vf) throw UsageError("no ops/viewfront on object " + m.obj);
  if (!(*vf == *mx)) return false;
  const Action &last = *s.opAt(o, *mx);
  if (m.method == "pop" || m.method == "deq") {
    ActKind addKind = m.method == "pop" ? ActKind::Push : ActKind::Enq;
    std::optional<Rat> next =
        m.method == "pop" ? greatestUnmatched(s, o, addKind)
                          : firstUnmatched(s, o, addKind);
    if (m.hasArg && m.arg.isEmpty()) return !next.has_value();
    if (!next) return false;
    const Action &w = *s.opAt(o, *next);
    return !m.hasArg || w.wval == m.arg;
  }
  return literalMatch(m, last);
}

/// Synchronising abstract actions: releasing enqueues/pushes, lock releases
/// (and the initial op, whose view transfer is trivial).
bool inSyncSet(const Action &a) {
  switch (a.kind) {
  case ActKind::Enq:
  case ActKind::Push:
    return modeReleasing(a.mode);
  case ActKind::LockRelease:
  case ActKind::LockInit:
  case ActKind::QInit:
  case ActKind::SInit:
    return true;
  default:
    return false;
  }
}

} // namespace

bool evalAssertion(const Asrt &a, const Config &cfg, const ExecProgram &prog) {
  using T = Assertion::Tag;
  MethCtx mc{prog, cfg};
  switch (a->tag) {
  case T::True:
    return true;
  case T::False:
    return false;
  case T::Not:
    return !evalAssertion(a->kids[0], cfg, prog);
  case T::And:
    for (const auto &k : a->kids)
      if (!evalAssertion(k, cfg, prog)) return false;
    return true;
  case T::Or:
    for (const auto &k : a->kids)
      if (evalAssertion(k, cfg, prog)) return true;
    return false;
  case T::Implies:
    return !evalAssertion(a->kids[0], cfg, prog) ||
           evalAssertion(a->kids[1], cfg, prog);

  case T::PcIn: {
    auto it = cfg.threads.find(a->tid);
    if (it == cfg.threads.end())
      throw UsageError("pc of unknown thread t" + std::to_string(a->tid));
    return std::find(a->pcSet.begin(), a->pcSet.end(), it->second.line) !=
           a->pcSet.end();
  }

  case T::LocalIn: {
    bool found = false;
    Value v;
    for (const auto &[t, env] : cfg.locals) {
      auto it = env.find(a->x);
      if (it != env.end()) {
        if (found) throw UsageError("ambiguous local " + a->x);
        found = true;
        v = it->second;
      }
    }
    if (!found) throw UsageError("unbound local " + a->x);
    return std::find(a->valSet.begin(), a->valSet.end(), v) !=
           a->valSet.end();
  }

  case T::PossibleVar: {
    const CompState &s = componentOf(cfg, a->comp);
    Location x = prog.locs.count(a->x) ? prog.locs.at(a->x)
                                       : throw UsageError("unknown " + a->x);
    for (const auto &w : observable(s, a->tid, x))
      if (w.act.writtenValue() == a->u) return true;
    return false;
  }

  case T::DefiniteVar: {
    const CompState &s = componentOf(cfg, a->comp);
    if (!prog.locs.count(a->x)) throw UsageError("unknown " + a->x);
    Location x = prog.locs.at(a->x);
    auto vf = s.viewfront(a->tid, x);
    auto mx = s.maxTS(x);
    if (!vf || !mx) throw UsageError("no ops/viewfront on " + a->x);
    return *vf == *mx && s.opAt(x, *mx)->writtenValue() == a->u;
  }

  case T::PossibleMeth:
    return !methodSources(mc, componentOf(cfg, a->comp), a->tid, a->meth)
                .empty();

  case T::DefiniteMeth:
    return definiteMethod(mc, componentOf(cfg, a->comp), a->tid, a->meth);

  case T::CondVar: {
    const CompState &src = componentOf(cfg, a->comp);
    const CompState &tgt = componentOf(cfg, a->comp2);
    if (!prog.locs.count(a->x) || !prog.locs.count(a->y))
      throw UsageError("unknown variable in conditional observation");
    Location x = prog.locs.at(a->x);
    Location y = prog.locs.at(a->y);
    for (const auto &w : observable(src, a->tid, x)) {
      if (!(w.act.writtenValue() == a->u)) continue;
      if (!w.act.releasing()) return false;
      auto mv = src.mview.find(OpRef{x, w.ts});
      if (mv == src.mview.end() || !dview(mv->second, tgt, y, a->v))
        return false;
    }
    return true;
  }

  case T::CondMeth: {
    const CompState &src = componentOf(cfg, a->comp);
    const CompState &tgt = componentOf(cfg, a->comp2);
    if (!prog.locs.count(a->y))
      throw UsageError("unknown variable " + a->y);
    Location y = prog.locs.at(a->y);
    for (const auto &w : methodSources(mc, src, a->tid, a->meth)) {
      if (!inSyncSet(w.act)) return false;
      auto mv = src.mview.find(OpRef{w.act.loc, w.ts});
      if (mv == src.mview.end() || !dview(mv->second, tgt, y, a->v))
        return false;
    }
    return true;
  }

  case T::CoveredMeth: {
    const CompState &s = componentOf(cfg, a->comp);
    Location o = objLoc(mc, a->meth.obj);
    auto mx = s.maxTS(o);
    if (!mx) throw UsageError("no ops on " + a->meth.obj);
    for (const auto &[ts, act] : s.timelines.at(o)) {
      if (s.covered(o, ts)) continue;
      if (!literalMatch(a->meth, act) || !(ts == *mx)) return false;
    }
    return true;
  }

  case T::CW: {
    const CompState &s = componentOf(cfg, a->comp);
    if (!prog.locs.count(a->x)) throw UsageError("unknown " + a->x);
    Location x = prog.locs.at(a->x);
    auto mx = s.maxTS(x);
    if (!mx) throw UsageError("no ops on " + a->x);
    for (const auto &[ts, act] : s.timelines.at(x)) {
      if (s.covered(x, ts)) continue;
      if (!(ts == *mx) || !(act.writtenValue() == a->u)) return false;
    }
    return true;
  }

  case T::HiddenMeth: {
    const CompState &s = componentOf(cfg, a->comp);
    Location o = objLoc(mc, a->meth.obj);
    bool exists = false;
    for (const auto &[ts, act] : s.timelines.at(o)) {
      if (!literalMatch(a->meth, act)) continue;
      exists = true;
      if (!s.covered(o, ts)) return false;
    }
    return exists;
  }
  }
  return false;
}

// ---------------------------------------------------------------------------

namespace {

bool atPoint(const Config &cfg, const ExecProgram &prog, Tid t, int line) {
  auto it = cfg.threads.find(t);
  if (it == cfg.threads.end()) return false;
  const ThreadState &st = it->second;
  if (st.line != line) return false;
  if (!st.cur) return true;
  const auto &stmts = prog.spec.threads[t - 1].stmts;
  if (line < 1 || line > static_cast<int>(stmts.size())) return false;
  // loop head re-entry: the residual equals the original statement
  return cmdEq(st.cur, stmts[line - 1]);
}

} // namespace

OutlineReport checkOutline(const ExecProgram &prog, const Exploration &ex) {
  OutlineReport rep;
  rep.truncated = !ex.truncated.empty();

  auto checkEverywhere = [&](const Asrt &a, Tid tid, int line,
                             const std::function<bool(int)> &relevant) {
    AnnotationVerdict v;
    v.tid = tid;
    v.line = line;
    v.text = printAssertion(a);
    for (size_t i = 0; i < ex.configs.size(); ++i) {
      if (!relevant(static_cast<int>(i))) continue;
      if (!evalAssertion(a, ex.configs[i], prog)) {
        v.holds = false;
        v.witness = static_cast<int>(i);
        break;
      }
    }
    rep.verdicts.push_back(std::move(v));
  };

  if (prog.spec.initially)
    checkEverywhere(prog.spec.initially, 0, 0,
                    [](int i) { return i == 0; });
  if (prog.spec.invariant)
    checkEverywhere(prog.spec.invariant, 0, 0, [](int) { return true; });
  for (size_t ti = 0; ti < prog.spec.threads.size(); ++ti) {
    Tid t = static_cast<Tid>(ti) + 1;
    for (const auto &[line, a] : prog.spec.threads[ti].annots)
      checkEverywhere(a, t, line, [&, line = line](int i) {
        return atPoint(ex.configs[i], prog, t, line);
      });
  }
  if (prog.spec.post)
    checkEverywhere(prog.spec.post, 0, -1, [&](int i) {
      return ex.terminals.count(i) != 0;
    });
  return rep;
}

// ---------------------------------------------------------------------------

bool StmtPattern::matches(const Edge &e, const Exploration &ex) const {
  if (e.silent && stmt != StmtKind::Alloc) return false;
  if (tid && e.tid != *tid) return false;
  if (stmt && e.stmt != *stmt) return false;
  if (act && e.action.kind != *act) return false;
  if (locName && e.action.loc.name != *locName) return false;
  if (extra && !extra(e, ex)) return false;
  return true;
}

TripleVerdict
checkHoareTriple(const Exploration &ex, const ExecProgram &prog,
                 const StmtPattern &pat, const Asrt &pre,
                 const std::function<Asrt(const Edge &)> &postFor) {
  TripleVerdict out;
  for (const Edge &e : ex.edges) {
    if (!pat.matches(e, ex)) continue;
    if (!evalAssertion(pre, ex.configs[e.src], prog)) continue;
    out.fired += 1;
    Asrt post = postFor(e);
    if (!evalAssertion(post, ex.configs[e.dst], prog)) {
      out.v = TripleVerdict::V::Fail;
      out.witness = "edge " + std::to_string(e.src) + " -" +
                    (e.silent ? std::string("eps") : e.action.str()) + "-> " +
                    std::to_string(e.dst) + " violates " +
                    printAssertion(post);
      return out;
    }
  }
  out.v = out.fired ? TripleVerdict::V::Pass : TripleVerdict::V::Vacuous;
  return out;
}

} // namespace rarcheck
