#include "rarcheck/explore.hpp"

#include <algorithm>
#include <map>
#include <thread>
#include <unordered_map>

namespace rarcheck {

namespace {

/// Applies one resolved thread step to the configuration.
Config applyThreadStep(const Config &cfg, const ExecProgram &prog, Tid t,
                       const ThreadStep &step, const Cmd &rest,
                       const LocalEnv &ls) {
  Config next = cfg;
  ThreadState &st = next.threads.at(t);
  (void)prog;
  if (!rest || rest->tag == CmdTag::Done || rest->tag == CmdTag::ValueTerm) {
    st.line += 1;
    st.cur = nullptr;
  } else {
    st.cur = rest;
  }
  if (step.label.loopEnter >= 0)
    st.loopCount[step.label.loopEnter] += 1;
  if (step.label.loopExit >= 0) st.loopCount.erase(step.label.loopExit);
  next.locals[t] = ls;
  return next;
}

} // namespace

std::vector<CombinedStep> combinedSteps(const Config &cfg,
                                        const ExecProgram &prog,
                                        const Bounds &b, bool *suppressed) {
  std::vector<CombinedStep> out;
  if (suppressed) *suppressed = false;

  for (const auto &[t, st] : cfg.threads) {
    const auto &stmts = prog.spec.threads[t - 1].stmts;
    if (st.line > static_cast<int>(stmts.size())) continue; // thread done
    Cmd current = st.cur ? st.cur : stmts[st.line - 1];
    const LocalEnv &ls = cfg.locals.at(t);

    std::vector<ThreadStep> steps = threadSteps(current, ls, prog.locs, t);
    for (const ThreadStep &step : steps) {
      // loop bounding is owned here, not by the program semantics
      if (step.label.loopEnter >= 0) {
        auto it = st.loopCount.find(step.label.loopEnter);
        int used = it == st.loopCount.end() ? 0 : it->second;
        if (used >= b.maxLoopIter) {
          if (suppressed) *suppressed = true;
          continue;
        }
      }

      switch (step.label.k) {
      case StepLabel::K::Eps: {
        CombinedStep cs;
        cs.next = canonicalize(
            applyThreadStep(cfg, prog, t, step, step.rest, step.ls));
        cs.silent = true;
        cs.tid = t;
        cs.line = st.line;
        out.push_back(std::move(cs));
        break;
      }

      case StepLabel::K::Alloc: {
        long long limit = 2 + 2 * prog.treiberNodes;
        long long addr = -1;
        for (long long a = 2; a + 1 < limit; a += 2) {
          if (!cfg.usedAddr.count(a)) {
            addr = a;
            break;
          }
        }
        if (addr < 0) throw UsageError("treiber node pool exhausted");
        LocalEnv ls2 = step.ls;
        ls2[step.label.allocVar] = Value::integer(addr);
        Config next = applyThreadStep(cfg, prog, t, step, step.rest, ls2);
        next.usedAddr.insert(addr);
        next.usedAddr.insert(addr + 1);
        CombinedStep cs;
        cs.next = canonicalize(next);
        cs.silent = true;
        cs.tid = t;
        cs.line = st.line;
        cs.stmt = StmtKind::Alloc;
        out.push_back(std::move(cs));
        break;
      }

      case StepLabel::K::Mem: {
        bool clientSide = step.label.proto.loc.isClient();
        const CompState &exec = clientSide ? cfg.client : cfg.lib;
        const CompState &ctx = clientSide ? cfg.lib : cfg.client;
        MemStepResult r =
            memStep(exec, ctx, t, step.label.proto, step.label.vc,
                    step.label.neq, step.label.faiIncrement);
        for (auto &succ : r.successors) {
          LocalEnv ls2 = step.ls;
          if (!step.label.bind.empty()) ls2[step.label.bind] = succ.action.rval;
          Config next = applyThreadStep(cfg, prog, t, step, step.rest, ls2);
          if (clientSide) {
            next.client = succ.exec;
            next.lib = succ.ctx;
          } else {
            next.lib = succ.exec;
            next.client = succ.ctx;
          }
          if (step.label.stmt == StmtKind::CasSucc &&
              step.label.aux != CasAux::None) {
            Value av = step.ls.count(step.label.auxVar)
                           ? step.ls.at(step.label.auxVar)
                           : Value::undef();
            if (!av.isInt())
              throw UsageError("CAS auxiliary variable " + step.label.auxVar +
                               " is not an address");
            if (step.label.aux == CasAux::AddPushed)
              next.pushedAddr.insert(av.i);
            else
              next.pushedAddr.erase(av.i);
          }
          CombinedStep cs;
          cs.next = canonicalize(next);
          cs.silent = false;
          cs.action = succ.action;
          cs.stmt = step.label.stmt;
          cs.tid = t;
          cs.line = st.line;
          out.push_back(std::move(cs));
        }
        break;
      }

      case StepLabel::K::Obj: {
        const auto &info = prog.objects.at(step.label.proto.loc.name);
        std::vector<ObjSuccessor> succs;
        switch (info.kind) {
        case ObjectKind::Lock:
          succs = lockStep(cfg.lib, cfg.client, t, step.label.proto,
                           step.label.proto.mode == SyncMode::Relaxed);
          break;
        case ObjectKind::Queue:
          succs = queueStep(cfg.lib, cfg.client, t, step.label.proto);
          break;
        case ObjectKind::Stack:
          succs = stackStep(cfg.lib, cfg.client, t, step.label.proto);
          break;
        }
        for (auto &succ : succs) {
          LocalEnv ls2 = step.ls;
          Cmd rest;
          const Action &a = succ.action;
          switch (a.kind) {
          case ActKind::LockAcquire:
            if (!step.label.bind.empty())
              ls2[step.label.bind] = Value::integer(a.index);
            rest = cmd::inlined(cmd::valueTerm(Value::boolean(true)),
                                a.loc.name, "acquire", "");
            break;
          case ActKind::LockRelease:
            rest = cmd::inlined(cmd::done(), a.loc.name, "release", "");
            break;
          case ActKind::Enq:
          case ActKind::Push:
            rest = cmd::inlined(cmd::done(), a.loc.name,
                                a.kind == ActKind::Enq ? "enq" : "push", "");
            break;
          case ActKind::Deq:
          case ActKind::Pop:
            rest = cmd::inlined(cmd::valueTerm(a.rval), a.loc.name,
                                a.kind == ActKind::Deq ? "deq" : "pop",
                                step.label.bind);
            break;
          default:
            throw UsageError("unexpected object action");
          }
          Config next = applyThreadStep(cfg, prog, t, step, rest, ls2);
          next.lib = succ.lib;
          next.client = succ.cli;
          CombinedStep cs;
          cs.next = canonicalize(next);
          cs.silent = false;
          cs.action = a;
          cs.stmt = StmtKind::Method;
          cs.tid = t;
          cs.line = st.line;
          out.push_back(std::move(cs));
        }
        break;
      }
      }
    }
  }
  return out;
}

namespace {

bool isTerminal(const Config &cfg, const ExecProgram &prog) {
  for (const auto &[t, st] : cfg.threads)
    if (st.line <= static_cast<int>(prog.spec.threads[t - 1].stmts.size()))
      return false;
  return true;
}

} // namespace

Exploration explore(const ExecProgram &prog, const Bounds &b) {
  Exploration ex;
  std::unordered_map<std::string, int> seen;

  Config init = canonicalize(initConfiguration(prog));
  seen[configKey(init)] = 0;
  ex.configs.push_back(init);
  ex.out.emplace_back();
  if (isTerminal(init, prog)) ex.terminals.insert(0);

  struct Expansion {
    bool suppressed = false;
    std::vector<CombinedStep> steps;
  };

  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    // expand the whole layer (optionally in parallel), then merge in order
    std::vector<Expansion> results(frontier.size());
    auto work = [&](size_t begin, size_t stride) {
      for (size_t i = begin; i < frontier.size(); i += stride) {
        Expansion &r = results[i];
        r.steps = combinedSteps(ex.configs[frontier[i]], prog, b,
                                &r.suppressed);
      }
    };
    int workers = std::max(1, b.workers);
    if (workers == 1 || frontier.size() < 2) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w)
        pool.emplace_back(work, static_cast<size_t>(w),
                          static_cast<size_t>(workers));
      for (auto &th : pool) th.join();
    }

    std::vector<int> nextFrontier;
    for (size_t i = 0; i < frontier.size(); ++i) {
      int src = frontier[i];
      if (results[i].suppressed) ex.truncated.insert(src);
      for (CombinedStep &cs : results[i].steps) {
        std::string key = configKey(cs.next);
        auto [it, fresh] = seen.try_emplace(
            key, static_cast<int>(ex.configs.size()));
        int dst = it->second;
        if (fresh) {
          if (static_cast<long long>(ex.configs.size()) >= b.maxSteps)
            throw BudgetExhausted("state budget exhausted at " +
                                  std::to_string(ex.configs.size()) +
                                  " configurations");
          ex.configs.push_back(cs.next);
          ex.out.emplace_back();
          if (isTerminal(cs.next, prog))
            ex.terminals.insert(dst);
          nextFrontier.push_back(dst);
        }
        Edge e;
        e.src = src;
        e.dst = dst;
        e.tid = cs.tid;
        e.silent = cs.silent;
        e.action = cs.action;
        e.stmt = cs.stmt;
        e.line = cs.line;
        ex.out[src].push_back(static_cast<int>(ex.edges.size()));
        ex.edges.push_back(std::move(e));
      }
    }
    frontier = std::move(nextFrontier);
  }
  return ex;
}

std::set<std::vector<Value>> finalValuations(const Exploration &ex,
                                             const ExecProgram &prog,
                                             const std::vector<std::string> &vars) {
  std::set<std::vector<Value>> out;
  for (int idx : ex.terminals) {
    const Config &cfg = ex.configs[idx];
    std::vector<Value> row;
    for (const auto &v : vars) {
      bool found = false;
      Value val;
      for (const auto &[t, env] : cfg.locals) {
        auto it = env.find(v);
        if (it != env.end()) {
          if (found)
            throw UsageError("final valuation: " + v +
                             " bound in several threads");
          found = true;
          val = it->second;
        }
      }
      if (!found) throw UsageError("final valuation: unbound local " + v);
      row.push_back(val);
    }
    out.insert(std::move(row));
  }
  return out;
}

} // namespace rarcheck
