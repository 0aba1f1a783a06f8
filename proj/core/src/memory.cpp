#include "rarcheck/memory.hpp"

namespace rarcheck {

namespace {

View emptyView;

const View &mviewOf(const CompState &s, const Location &x, const Rat &ts) {
  auto it = s.mview.find(OpRef{x, ts});
  return it == s.mview.end() ? emptyView : it->second;
}

/// Fresh timestamp immediately after q on x's timeline: the midpoint of the
/// gap to the next op, or q+1 at the end.
Rat freshAfter(const CompState &s, const Location &x, const Rat &q) {
  const auto &tl = s.timelines.at(x);
  auto it = tl.upper_bound(q);
  if (it == tl.end()) return q + Rat(1);
  return Rat::mid(q, it->first);
}

} // namespace

Config initConfiguration(const ExecProgram &prog) {
  Config cfg;
  int nThreads = static_cast<int>(prog.spec.threads.size());

  auto initComp = [&](CompState &comp, const Location &x, const Action &a) {
    comp.timelines[x][Rat(0)] = a;
  };

  // client variables
  for (const auto &ia : prog.spec.init) {
    if (!ia.global) continue;
    Location x = prog.locs.at(ia.name);
    initComp(cfg.client, x, Action::write(x, ia.v, SyncMode::Relaxed, 0));
  }
  // implementation library variables
  for (const auto &ia : prog.libInit) {
    Location x = prog.locs.at(ia.name);
    initComp(cfg.lib, x, Action::write(x, ia.v, SyncMode::Relaxed, 0));
  }
  // abstract object init ops
  for (const auto &[name, info] : prog.objects) {
    if (!info.abstract) continue;
    Location o = prog.locs.at(name);
    Action a;
    a.loc = o;
    a.kind = info.kind == ObjectKind::Lock    ? ActKind::LockInit
             : info.kind == ObjectKind::Queue ? ActKind::QInit
                                              : ActKind::SInit;
    initComp(cfg.lib, o, a);
  }

  // all viewfronts at the timestamp-0 ops
  View cliView, libView;
  for (const auto &[x, tl] : cfg.client.timelines) cliView[x] = Rat(0);
  for (const auto &[x, tl] : cfg.lib.timelines) libView[x] = Rat(0);
  for (Tid t = 1; t <= nThreads; ++t) {
    cfg.client.tview[t] = cliView;
    cfg.lib.tview[t] = libView;
  }

  // initial modification views span both components
  View full = cliView;
  for (const auto &[x, ts] : libView) full[x] = ts;
  for (const auto &[x, tl] : cfg.client.timelines)
    cfg.client.mview[OpRef{x, Rat(0)}] = full;
  for (const auto &[x, tl] : cfg.lib.timelines)
    cfg.lib.mview[OpRef{x, Rat(0)}] = full;

  // locals: rval everywhere, plus optional Init assignments in every thread
  for (Tid t = 1; t <= nThreads; ++t) {
    cfg.locals[t]["rval"] = Value::undef();
    for (const auto &ia : prog.spec.init)
      if (!ia.global) cfg.locals[t][ia.name] = ia.v;
    cfg.threads[t] = ThreadState{};
  }
  return cfg;
}

MemStepResult memStep(const CompState &exec, const CompState &ctx, Tid t,
                      const Action &proto, StepLabel::VC vc, const Value &neq,
                      bool faiIncrement) {
  MemStepResult out;
  const Location &x = proto.loc;
  if (!exec.hasLocation(x))
    throw UsageError("memStep: location " + x.name +
                     " not in executing component");

  auto obs = observable(exec, t, x);

  auto valueOk = [&](const Value &v) {
    switch (vc) {
    case StepLabel::VC::Fixed: return v == proto.rval;
    case StepLabel::VC::AnyRead: return true;
    case StepLabel::VC::ReadNe: return !(v == neq);
    }
    return false;
  };

  switch (proto.kind) {
  case ActKind::Read: {
    for (const auto &w : obs) {
      Value v = w.act.writtenValue();
      if (!valueOk(v)) continue;
      Action resolved = proto;
      resolved.rval = v;
      bool sync = w.act.releasing() && modeAcquiring(proto.mode);
      CompState exec2 = exec;
      CompState ctx2 = ctx;
      if (sync) {
        const View &mv = mviewOf(exec, x, w.ts);
        exec2.tview[t] = mergeViews(exec.tview.at(t), mv);
        ctx2.tview[t] = mergeViews(ctx.tview.at(t), mv);
      } else {
        exec2.tview[t][x] = w.ts;
      }
      out.successors.push_back({std::move(exec2), std::move(ctx2), resolved});
    }
    break;
  }

  case ActKind::Write: {
    for (const auto &w : obs) {
      if (exec.covered(x, w.ts)) continue;
      Rat ts2 = freshAfter(exec, x, w.ts);
      Action resolved = proto;
      CompState exec2 = exec;
      exec2.timelines[x][ts2] = resolved;
      exec2.tview[t][x] = ts2;
      View mv = exec2.tview.at(t);
      for (const auto &[y, ts] : ctx.tview.at(t)) mv[y] = ts;
      exec2.mview[OpRef{x, ts2}] = std::move(mv);
      out.successors.push_back({std::move(exec2), ctx, resolved});
    }
    break;
  }

  case ActKind::Update: {
    bool acquireSide = proto.mode == SyncMode::RelAcq;
    for (const auto &w : obs) {
      if (exec.covered(x, w.ts)) continue;
      Value rv = w.act.writtenValue();
      if (faiIncrement) {
        if (!rv.isInt()) continue;
      } else if (!valueOk(rv)) {
        continue;
      }
      Action resolved = proto;
      resolved.rval = rv;
      if (faiIncrement) resolved.wval = Value::integer(rv.i + 1);

      Rat ts2 = freshAfter(exec, x, w.ts);
      CompState exec2 = exec;
      CompState ctx2 = ctx;
      exec2.timelines[x][ts2] = resolved;
      exec2.cvd.insert(OpRef{x, w.ts});

      bool sync = acquireSide && w.act.releasing();
      View tv = exec.tview.at(t);
      tv[x] = ts2;
      if (sync) tv = mergeViews(tv, mviewOf(exec, x, w.ts));
      exec2.tview[t] = tv;
      if (sync)
        ctx2.tview[t] = mergeViews(ctx.tview.at(t), mviewOf(exec, x, w.ts));

      View mv = exec2.tview.at(t);
      for (const auto &[y, ts] : ctx2.tview.at(t)) mv[y] = ts;
      exec2.mview[OpRef{x, ts2}] = std::move(mv);
      out.successors.push_back({std::move(exec2), std::move(ctx2), resolved});
    }
    break;
  }

  default:
    throw UsageError("memStep: not a read/write/update action");
  }
  return out;
}

} // namespace rarcheck
