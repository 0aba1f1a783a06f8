#include "rarcheck/lang.hpp"

#include <functional>
#include <sstream>

namespace rarcheck {

namespace {

ExpP c0() { return Exp::constant(Value::integer(0)); }
ExpP cInt(long long v) { return Exp::constant(Value::integer(v)); }
ExpP lv(const std::string &n) { return Exp::local(n); }

struct Elaborator {
  ExecProgram out;
  int nextSite = 0;

  std::string mangle(const std::string &obj, const std::string &n) {
    return obj + "." + n;
  }

  void declareGlobal(const std::string &name, LocKind kind) {
    if (out.locs.count(name))
      throw UsageError("global name collision: " + name);
    out.locs[name] = Location{name, kind};
  }

  int freshSite() {
    int s = nextSite++;
    out.spec.loopSites = nextSite;
    return s;
  }

  // ---- implementation bodies -------------------------------------------

  Cmd seqlockAcquire(const std::string &o) {
    std::string r = mangle(o, "r");
    std::string ok = mangle(o, "ok");
    int inner = freshSite();
    int outer = freshSite();
    Cmd spin = cmd::doUntil(cmd::globalRead(r, "glb", SyncMode::Acquire),
                            Exp::unary(Exp::Tag::Even, lv(r)), inner);
    Cmd tryCas =
        cmd::cas(ok, "glb", lv(r), Exp::binary(Exp::Tag::Add, lv(r), cInt(1)),
                 SyncMode::RelAcq);
    Cmd loop = cmd::doUntil(cmd::seq(spin, tryCas), lv(ok), outer);
    return cmd::seq(loop, cmd::ret(Exp::constant(Value::boolean(true))));
  }

  Cmd seqlockRelease(const std::string &o, bool relaxed) {
    std::string r = mangle(o, "r");
    return cmd::globalWrite("glb", Exp::binary(Exp::Tag::Add, lv(r), cInt(2)),
                            relaxed ? SyncMode::Relaxed : SyncMode::Release);
  }

  Cmd ticketAcquire(const std::string &o) {
    std::string mt = mangle(o, "mt");
    std::string sn = mangle(o, "sn");
    int spin = freshSite();
    Cmd fai = cmd::fai(mt, "nt", SyncMode::RelAcq);
    Cmd wait = cmd::doUntil(cmd::globalRead(sn, "sn", SyncMode::Acquire),
                            Exp::binary(Exp::Tag::Eq, lv(sn), lv(mt)), spin);
    return cmd::seq(cmd::seq(fai, wait),
                    cmd::ret(Exp::constant(Value::boolean(true))));
  }

  Cmd ticketRelease(const std::string &o) {
    std::string sn = mangle(o, "sn");
    return cmd::globalWrite("sn", Exp::binary(Exp::Tag::Add, lv(sn), cInt(1)),
                            SyncMode::Release);
  }

  Cmd treiberPush(const std::string &o, const ExpP &arg) {
    std::string nv = mangle(o, "nv");
    std::string top = mangle(o, "top");
    std::string ok = mangle(o, "ok");
    int retry = freshSite();
    Cmd body = cmd::seq(
        cmd::seq(cmd::globalRead(top, "Top", SyncMode::Acquire),
                 cmd::indWrite(nv, 1, lv(top), SyncMode::Relaxed)),
        cmd::cas(ok, "Top", lv(top), lv(nv), SyncMode::Release,
                 CasAux::AddPushed, nv));
    Cmd loop = cmd::doUntil(body, lv(ok), retry);
    return cmd::seq(
        cmd::seq(cmd::newNode(nv), cmd::indWrite(nv, 0, arg, SyncMode::Relaxed)),
        loop);
  }

  Cmd treiberPop(const std::string &o) {
    std::string top = mangle(o, "top");
    std::string nt = mangle(o, "nt");
    std::string ok = mangle(o, "ok");
    std::string ret = mangle(o, "ret");
    int spin = freshSite();
    int retry = freshSite();
    Cmd waitTop = cmd::doUntil(cmd::globalRead(top, "Top", SyncMode::Acquire),
                               Exp::binary(Exp::Tag::Ne, lv(top), c0()), spin);
    Cmd body = cmd::seq(
        cmd::seq(waitTop, cmd::indRead(nt, top, 1, SyncMode::Relaxed)),
        cmd::cas(ok, "Top", lv(top), lv(nt), SyncMode::Release,
                 CasAux::DelPushed, top));
    Cmd loop = cmd::doUntil(body, lv(ok), retry);
    return cmd::seq(loop, cmd::seq(cmd::indRead(ret, top, 0, SyncMode::Relaxed),
                                   cmd::ret(lv(ret))));
  }

  // Replaces a method call with the corresponding inlined implementation.
  Cmd fillHole(const Command &call, const ObjectDecl &obj) {
    const std::string &o = obj.name;
    const std::string &m = call.method;
    auto wrap = [&](Cmd body) {
      return cmd::inlined(std::move(body), o, m, call.var);
    };
    if (obj.kind == "seqlock" || obj.kind == "seqlock-rlx") {
      if (m == "acquire") return wrap(seqlockAcquire(o));
      if (m == "release")
        return wrap(seqlockRelease(o, obj.kind == "seqlock-rlx"));
    } else if (obj.kind == "ticketlock") {
      if (m == "acquire") return wrap(ticketAcquire(o));
      if (m == "release") return wrap(ticketRelease(o));
    } else if (obj.kind == "treiber") {
      if (m == "push") {
        if (!call.e1) throw UsageError("push requires an argument");
        return wrap(treiberPush(o, call.e1));
      }
      if (m == "pop") return wrap(treiberPop(o));
    }
    throw UsageError("object " + o + " (" + obj.kind + ") has no method " + m);
  }

  void validateAbstractCall(const Command &call, const ObjectDecl &obj) {
    const std::string &m = call.method;
    bool ok = false;
    if (obj.kind == "lock") ok = (m == "acquire" || m == "release");
    if (obj.kind == "queue") ok = (m == "enq" || m == "deq");
    if (obj.kind == "stack") ok = (m == "push" || m == "pop");
    if (!ok)
      throw UsageError("object " + obj.name + " (" + obj.kind +
                       ") has no method " + m);
    if ((m == "push" || m == "enq") && modeAcquiring(call.mode))
      throw UsageError(m + " cannot be acquiring");
    if ((m == "pop" || m == "deq") && modeReleasing(call.mode))
      throw UsageError(m + " cannot be releasing");
    if ((m == "push" || m == "enq") && !call.e1)
      throw UsageError(m + " requires an argument");
  }

  Cmd rewrite(const Cmd &c, const std::function<Cmd(const Command &)> &onCall) {
    if (!c) return c;
    switch (c->tag) {
    case CmdTag::MethodCall:
      return onCall(*c);
    case CmdTag::Seq:
      return cmd::seq(rewrite(c->c1, onCall), rewrite(c->c2, onCall));
    case CmdTag::If:
      return cmd::ifElse(c->e1, rewrite(c->c1, onCall), rewrite(c->c2, onCall));
    case CmdTag::While: {
      // keep the original site id
      return cmd::whileLoop(c->e1, rewrite(c->c1, onCall), c->site);
    }
    case CmdTag::DoUntil:
      return cmd::doUntil(rewrite(c->c1, onCall), c->e1, c->site);
    default:
      return c;
    }
  }

  int countCalls(const Cmd &c, const std::string &obj,
                 const std::string &method) {
    if (!c) return 0;
    switch (c->tag) {
    case CmdTag::MethodCall:
      return (c->obj == obj && c->method == method) ? 1 : 0;
    case CmdTag::Seq:
    case CmdTag::If:
      return countCalls(c->c1, obj, method) + countCalls(c->c2, obj, method);
    case CmdTag::While:
    case CmdTag::DoUntil:
      return countCalls(c->c1, obj, method);
    default:
      return 0;
    }
  }

  ExecProgram run(const ProgramSpec &spec) {
    out.spec = spec;
    nextSite = spec.loopSites;

    for (const auto &ia : spec.init) {
      if (!ia.global) continue;
      declareGlobal(ia.name, LocKind::ClientVar);
    }

    for (const auto &obj : spec.objects) {
      ObjectInfo info;
      info.name = obj.name;
      info.declaredKind = obj.kind;
      if (obj.kind == "lock" || obj.kind == "queue" || obj.kind == "stack") {
        info.abstract = true;
        info.kind = obj.kind == "lock"    ? ObjectKind::Lock
                    : obj.kind == "queue" ? ObjectKind::Queue
                                          : ObjectKind::Stack;
        declareGlobal(obj.name, LocKind::ObjectHandle);
      } else {
        info.abstract = false;
        if (obj.kind == "seqlock" || obj.kind == "seqlock-rlx") {
          declareGlobal("glb", LocKind::LibraryVar);
          out.libInit.push_back(InitAssign{true, "glb", Value::integer(0)});
        } else if (obj.kind == "ticketlock") {
          declareGlobal("nt", LocKind::LibraryVar);
          declareGlobal("sn", LocKind::LibraryVar);
          out.libInit.push_back(InitAssign{true, "nt", Value::integer(0)});
          out.libInit.push_back(InitAssign{true, "sn", Value::integer(0)});
        } else if (obj.kind == "treiber") {
          declareGlobal("Top", LocKind::LibraryVar);
          out.libInit.push_back(InitAssign{true, "Top", Value::integer(0)});
          int pushes = 0;
          for (const auto &t : spec.threads)
            for (const auto &s : t.stmts)
              pushes += countCalls(s, obj.name, "push");
          out.treiberNodes = pushes;
          for (int n = 0; n < pushes; ++n) {
            long long a = 2 + 2 * n;
            declareGlobal(std::to_string(a), LocKind::LibraryVar);
            declareGlobal(std::to_string(a + 1), LocKind::LibraryVar);
            out.libInit.push_back(
                InitAssign{true, std::to_string(a), Value::integer(0)});
            out.libInit.push_back(
                InitAssign{true, std::to_string(a + 1), Value::integer(0)});
          }
        } else {
          throw UsageError("unknown object kind " + obj.kind);
        }
      }
      out.objects[obj.name] = info;
    }

    // rewrite method calls: validate abstract calls, inline implementations
    for (auto &th : out.spec.threads) {
      for (auto &stmt : th.stmts) {
        stmt = rewrite(stmt, [&](const Command &call) -> Cmd {
          auto it = out.objects.find(call.obj);
          if (it == out.objects.end())
            throw UsageError("undeclared object " + call.obj);
          const ObjectDecl *decl = nullptr;
          for (const auto &d : spec.objects)
            if (d.name == call.obj) decl = &d;
          if (it->second.abstract) {
            validateAbstractCall(call, *decl);
            auto c = std::make_shared<Command>(call);
            return c;
          }
          return fillHole(call, *decl);
        });
      }
    }
    return std::move(out);
  }
};

} // namespace

ExecProgram elaborate(const ProgramSpec &spec) {
  Elaborator e;
  return e.run(spec);
}

ProgramSpec stripAcquireBinders(const ProgramSpec &spec) {
  ProgramSpec out = spec;
  std::function<Cmd(const Cmd &)> go = [&](const Cmd &c) -> Cmd {
    if (!c) return c;
    switch (c->tag) {
    case CmdTag::MethodCall:
      if (c->method == "acquire" && !c->var.empty())
        return cmd::methodCall(c->obj, c->method, c->e1, c->mode, "");
      return c;
    case CmdTag::Seq: return cmd::seq(go(c->c1), go(c->c2));
    case CmdTag::If: return cmd::ifElse(c->e1, go(c->c1), go(c->c2));
    case CmdTag::While: return cmd::whileLoop(c->e1, go(c->c1), c->site);
    case CmdTag::DoUntil: return cmd::doUntil(go(c->c1), c->e1, c->site);
    default: return c;
    }
  };
  for (auto &t : out.threads)
    for (auto &s : t.stmts) s = go(s);
  // annotations may reference dropped binders; the refinement template
  // drops them along with outline metadata
  for (auto &t : out.threads) t.annots.clear();
  out.initially = nullptr;
  out.invariant = nullptr;
  out.post = nullptr;
  return out;
}

ProgramSpec withObjectKind(const ProgramSpec &spec, const std::string &kind) {
  ProgramSpec out = spec;
  if (out.objects.size() != 1)
    throw UsageError("object rebinding requires exactly one object");
  out.objects[0].kind = kind;
  return out;
}

} // namespace rarcheck
