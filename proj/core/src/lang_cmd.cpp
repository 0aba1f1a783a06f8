#include "rarcheck/lang.hpp"

#include <cassert>
#include <sstream>

namespace rarcheck {

// ---------------------------------------------------------------------------
// Expressions

ExpP Exp::constant(Value v) {
  auto e = std::make_shared<Exp>();
  e->tag = Tag::Const;
  e->cval = v;
  return e;
}
ExpP Exp::local(std::string name) {
  auto e = std::make_shared<Exp>();
  e->tag = Tag::Var;
  e->var = std::move(name);
  return e;
}
ExpP Exp::unary(Tag t, ExpP x) {
  auto e = std::make_shared<Exp>();
  e->tag = t;
  e->a = std::move(x);
  return e;
}
ExpP Exp::binary(Tag t, ExpP l, ExpP r) {
  auto e = std::make_shared<Exp>();
  e->tag = t;
  e->a = std::move(l);
  e->b = std::move(r);
  return e;
}

namespace {
long long wantInt(const Value &v, const char *what) {
  if (!v.isInt()) throw EvalError(std::string(what) + " on non-integer value");
  return v.i;
}
} // namespace

Value evalExp(const ExpP &e, const LocalEnv &ls) {
  switch (e->tag) {
  case Exp::Tag::Const:
    return e->cval;
  case Exp::Tag::Var: {
    auto it = ls.find(e->var);
    if (it == ls.end()) throw EvalError("unbound local " + e->var);
    return it->second;
  }
  case Exp::Tag::Not:
    return Value::boolean(!evalExp(e->a, ls).truthy());
  case Exp::Tag::Neg:
    return Value::integer(-wantInt(evalExp(e->a, ls), "negation"));
  case Exp::Tag::Even:
    return Value::boolean(wantInt(evalExp(e->a, ls), "even") % 2 == 0);
  case Exp::Tag::Add:
    return Value::integer(wantInt(evalExp(e->a, ls), "+") +
                          wantInt(evalExp(e->b, ls), "+"));
  case Exp::Tag::Sub:
    return Value::integer(wantInt(evalExp(e->a, ls), "-") -
                          wantInt(evalExp(e->b, ls), "-"));
  case Exp::Tag::Eq:
    return Value::boolean(evalExp(e->a, ls) == evalExp(e->b, ls));
  case Exp::Tag::Ne:
    return Value::boolean(!(evalExp(e->a, ls) == evalExp(e->b, ls)));
  case Exp::Tag::Lt:
    return Value::boolean(wantInt(evalExp(e->a, ls), "<") <
                          wantInt(evalExp(e->b, ls), "<"));
  case Exp::Tag::Le:
    return Value::boolean(wantInt(evalExp(e->a, ls), "<=") <=
                          wantInt(evalExp(e->b, ls), "<="));
  case Exp::Tag::Gt:
    return Value::boolean(wantInt(evalExp(e->a, ls), ">") >
                          wantInt(evalExp(e->b, ls), ">"));
  case Exp::Tag::Ge:
    return Value::boolean(wantInt(evalExp(e->a, ls), ">=") >=
                          wantInt(evalExp(e->b, ls), ">="));
  case Exp::Tag::And:
    return Value::boolean(evalExp(e->a, ls).truthy() &&
                          evalExp(e->b, ls).truthy());
  case Exp::Tag::Or:
    return Value::boolean(evalExp(e->a, ls).truthy() ||
                          evalExp(e->b, ls).truthy());
  }
  throw EvalError("bad expression");
}

std::string printExp(const ExpP &e) {
  switch (e->tag) {
  case Exp::Tag::Const: {
    const Value &v = e->cval;
    if (v.isInt() && v.i == 0) return "0"; // `null` prints as 0
    return v.str();
  }
  case Exp::Tag::Var:
    return e->var;
  case Exp::Tag::Not:
    return "!(" + printExp(e->a) + ")";
  case Exp::Tag::Neg:
    return "-(" + printExp(e->a) + ")";
  case Exp::Tag::Even:
    return "even(" + printExp(e->a) + ")";
  default: {
    const char *op = "?";
    switch (e->tag) {
    case Exp::Tag::Add: op = "+"; break;
    case Exp::Tag::Sub: op = "-"; break;
    case Exp::Tag::Eq: op = "="; break;
    case Exp::Tag::Ne: op = "!="; break;
    case Exp::Tag::Lt: op = "<"; break;
    case Exp::Tag::Le: op = "<="; break;
    case Exp::Tag::Gt: op = ">"; break;
    case Exp::Tag::Ge: op = ">="; break;
    case Exp::Tag::And: op = "&&"; break;
    case Exp::Tag::Or: op = "||"; break;
    default: break;
    }
    return "(" + printExp(e->a) + " " + op + " " + printExp(e->b) + ")";
  }
  }
}

bool expEq(const ExpP &a, const ExpP &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
  case Exp::Tag::Const: return a->cval == b->cval;
  case Exp::Tag::Var: return a->var == b->var;
  case Exp::Tag::Not:
  case Exp::Tag::Neg:
  case Exp::Tag::Even:
    return expEq(a->a, b->a);
  default:
    return expEq(a->a, b->a) && expEq(a->b, b->b);
  }
}

// ---------------------------------------------------------------------------
// Command builders

namespace cmd {

namespace {
std::shared_ptr<Command> mk(CmdTag t) {
  auto c = std::make_shared<Command>();
  c->tag = t;
  return c;
}
} // namespace

Cmd done() {
  static const Cmd d = mk(CmdTag::Done);
  return d;
}
Cmd valueTerm(Value v) {
  auto c = mk(CmdTag::ValueTerm);
  c->cval = v;
  return c;
}
Cmd localAssign(std::string r, ExpP e) {
  auto c = mk(CmdTag::LocalAssign);
  c->var = std::move(r);
  c->e1 = std::move(e);
  return c;
}
Cmd globalWrite(std::string x, ExpP e, SyncMode m) {
  auto c = mk(CmdTag::GlobalWrite);
  c->gname = std::move(x);
  c->e1 = std::move(e);
  c->mode = m;
  return c;
}
Cmd globalRead(std::string r, std::string x, SyncMode m) {
  auto c = mk(CmdTag::GlobalRead);
  c->var = std::move(r);
  c->gname = std::move(x);
  c->mode = m;
  return c;
}
Cmd cas(std::string r, std::string x, ExpP expect, ExpP desired, SyncMode m,
        CasAux aux, std::string auxVar) {
  auto c = mk(CmdTag::Cas);
  c->var = std::move(r);
  c->gname = std::move(x);
  c->e1 = std::move(expect);
  c->e2 = std::move(desired);
  c->mode = m;
  c->aux = aux;
  c->auxVar = std::move(auxVar);
  return c;
}
Cmd fai(std::string r, std::string x, SyncMode m) {
  auto c = mk(CmdTag::Fai);
  c->var = std::move(r);
  c->gname = std::move(x);
  c->mode = m;
  return c;
}
Cmd seq(Cmd a, Cmd b) {
  auto c = mk(CmdTag::Seq);
  c->c1 = std::move(a);
  c->c2 = std::move(b);
  return c;
}
Cmd ifElse(ExpP cond, Cmd thenC, Cmd elseC) {
  auto c = mk(CmdTag::If);
  c->e1 = std::move(cond);
  c->c1 = std::move(thenC);
  c->c2 = std::move(elseC);
  return c;
}
Cmd whileLoop(ExpP cond, Cmd body, int site) {
  auto c = mk(CmdTag::While);
  c->e1 = std::move(cond);
  c->c1 = std::move(body);
  c->site = site;
  return c;
}
Cmd doUntil(Cmd body, ExpP guard, int site) {
  auto c = mk(CmdTag::DoUntil);
  c->c1 = std::move(body);
  c->e1 = std::move(guard);
  c->site = site;
  return c;
}
Cmd methodCall(std::string obj, std::string method, ExpP arg, SyncMode m,
               std::string resultVar) {
  auto c = mk(CmdTag::MethodCall);
  c->obj = std::move(obj);
  c->method = std::move(method);
  c->e1 = std::move(arg);
  c->mode = m;
  c->var = std::move(resultVar);
  return c;
}
Cmd inlined(Cmd body, std::string obj, std::string method,
            std::string resultVar) {
  auto c = mk(CmdTag::Inlined);
  c->c1 = std::move(body);
  c->obj = std::move(obj);
  c->method = std::move(method);
  c->var = std::move(resultVar);
  return c;
}
Cmd ret(ExpP e) {
  auto c = mk(CmdTag::Return);
  c->e1 = std::move(e);
  return c;
}
Cmd newNode(std::string r) {
  auto c = mk(CmdTag::NewNode);
  c->var = std::move(r);
  return c;
}
Cmd indWrite(std::string addrVar, int offset, ExpP e, SyncMode m) {
  auto c = mk(CmdTag::IndWrite);
  c->var2 = std::move(addrVar);
  c->offset = offset;
  c->e1 = std::move(e);
  c->mode = m;
  return c;
}
Cmd indRead(std::string r, std::string addrVar, int offset, SyncMode m) {
  auto c = mk(CmdTag::IndRead);
  c->var = std::move(r);
  c->var2 = std::move(addrVar);
  c->offset = offset;
  c->mode = m;
  return c;
}

namespace {
Cmd untilGuard(ExpP guard, Cmd loop, int site) {
  auto c = mk(CmdTag::UntilGuard);
  c->e1 = std::move(guard);
  c->c1 = std::move(loop);
  c->site = site;
  return c;
}
} // namespace

} // namespace cmd

bool cmdEq(const Cmd &a, const Cmd &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->tag != b->tag || a->var != b->var || a->var2 != b->var2 ||
      a->obj != b->obj || a->method != b->method || a->gname != b->gname ||
      a->mode != b->mode || a->site != b->site || a->offset != b->offset ||
      a->aux != b->aux || a->auxVar != b->auxVar || !(a->cval == b->cval))
    return false;
  if ((a->e1 == nullptr) != (b->e1 == nullptr)) return false;
  if (a->e1 && !expEq(a->e1, b->e1)) return false;
  if ((a->e2 == nullptr) != (b->e2 == nullptr)) return false;
  if (a->e2 && !expEq(a->e2, b->e2)) return false;
  if ((a->c1 == nullptr) != (b->c1 == nullptr)) return false;
  if (a->c1 && !cmdEq(a->c1, b->c1)) return false;
  if ((a->c2 == nullptr) != (b->c2 == nullptr)) return false;
  if (a->c2 && !cmdEq(a->c2, b->c2)) return false;
  return true;
}

namespace {
std::string ind(int n) { return std::string(2 * n, ' '); }

std::string auxSuffix(const Command &c) {
  if (c.aux == CasAux::AddPushed) return " @add_pushed(" + c.auxVar + ")";
  if (c.aux == CasAux::DelPushed) return " @del_pushed(" + c.auxVar + ")";
  return "";
}
} // namespace

std::string printCmd(const Cmd &c, int indent) {
  if (!c) return ind(indent) + "<null>";
  switch (c->tag) {
  case CmdTag::Done:
    return ind(indent) + "skip;";
  case CmdTag::ValueTerm:
    return ind(indent) + "value(" + c->cval.str() + ");";
  case CmdTag::LocalAssign:
    return ind(indent) + c->var + " := " + printExp(c->e1) + ";";
  case CmdTag::GlobalWrite:
    return ind(indent) + c->gname + " :=" + modeSuffix(c->mode) + " " +
           printExp(c->e1) + ";";
  case CmdTag::GlobalRead:
    return ind(indent) + c->var + " <-" + modeSuffix(c->mode) + " " +
           c->gname + ";";
  case CmdTag::Cas:
    return ind(indent) + c->var + " := CAS" + modeSuffix(c->mode) + "(" +
           c->gname + ", " + printExp(c->e1) + ", " + printExp(c->e2) + ")" +
           auxSuffix(*c) + ";";
  case CmdTag::Fai:
    return ind(indent) + c->var + " := FAI" + modeSuffix(c->mode) + "(" +
           c->gname + ");";
  case CmdTag::Seq:
    return printCmd(c->c1, indent) + "\n" + printCmd(c->c2, indent);
  case CmdTag::If: {
    std::string s = ind(indent) + "if " + printExp(c->e1) + " {\n" +
                    printCmd(c->c1, indent + 1) + "\n" + ind(indent) + "}";
    if (c->c2 && c->c2->tag != CmdTag::Done)
      s += " else {\n" + printCmd(c->c2, indent + 1) + "\n" + ind(indent) + "}";
    return s;
  }
  case CmdTag::While:
    return ind(indent) + "while " + printExp(c->e1) + " {\n" +
           printCmd(c->c1, indent + 1) + "\n" + ind(indent) + "}";
  case CmdTag::DoUntil:
    return ind(indent) + "do {\n" + printCmd(c->c1, indent + 1) + "\n" +
           ind(indent) + "} until " + printExp(c->e1) + ";";
  case CmdTag::UntilGuard:
    return ind(indent) + "until? " + printExp(c->e1) + ";";
  case CmdTag::MethodCall: {
    std::string call = c->obj + "." + c->method + modeSuffix(c->mode) + "(" +
                       (c->e1 ? printExp(c->e1) : "") + ")";
    if (!c->var.empty()) call = c->var + " := " + call;
    return ind(indent) + call + ";";
  }
  case CmdTag::Inlined:
    return ind(indent) + "[" + c->obj + "." + c->method +
           (c->var.empty() ? "" : (" -> " + c->var)) + " {\n" +
           printCmd(c->c1, indent + 1) + "\n" + ind(indent) + "}]";
  case CmdTag::Return:
    return ind(indent) + "return " + printExp(c->e1) + ";";
  case CmdTag::NewNode:
    return ind(indent) + c->var + " := newnode();";
  case CmdTag::IndWrite:
    return ind(indent) + "[" + c->var2 +
           (c->offset ? (" + " + std::to_string(c->offset)) : "") +
           "] :=" + modeSuffix(c->mode) + " " + printExp(c->e1) + ";";
  case CmdTag::IndRead:
    return ind(indent) + c->var + " <-" + modeSuffix(c->mode) + " [" +
           c->var2 + (c->offset ? (" + " + std::to_string(c->offset)) : "") +
           "];";
  }
  return ind(indent) + "?";
}

// ---------------------------------------------------------------------------
// Thread-local small-step semantics (program semantics).

namespace {

Location resolveLoc(const std::map<std::string, Location> &locs,
                    const std::string &name) {
  auto it = locs.find(name);
  if (it == locs.end()) throw UsageError("unknown global " + name);
  return it->second;
}

Action methodProto(const Command &c, const Location &obj, const LocalEnv &ls,
                   Tid t) {
  Action a;
  a.loc = obj;
  a.mode = c.mode;
  a.thread = t;
  if (c.method == "acquire") {
    a.kind = ActKind::LockAcquire;
  } else if (c.method == "release") {
    a.kind = ActKind::LockRelease;
  } else if (c.method == "push") {
    a.kind = ActKind::Push;
    a.wval = evalExp(c.e1, ls);
  } else if (c.method == "pop") {
    a.kind = ActKind::Pop;
  } else if (c.method == "enq") {
    a.kind = ActKind::Enq;
    a.wval = evalExp(c.e1, ls);
  } else if (c.method == "deq") {
    a.kind = ActKind::Deq;
  } else {
    throw UsageError("unknown method " + c.obj + "." + c.method);
  }
  return a;
}

} // namespace

std::vector<ThreadStep> threadSteps(const Cmd &c, const LocalEnv &ls,
                                    const std::map<std::string, Location> &locs,
                                    Tid t) {
  std::vector<ThreadStep> out;
  if (!c) return out;
  auto eps = [&](Cmd rest, LocalEnv ls2) {
    ThreadStep s;
    s.label.k = StepLabel::K::Eps;
    s.rest = std::move(rest);
    s.ls = std::move(ls2);
    out.push_back(std::move(s));
    return &out.back();
  };

  switch (c->tag) {
  case CmdTag::Done:
  case CmdTag::ValueTerm:
    break;

  case CmdTag::LocalAssign: {
    LocalEnv ls2 = ls;
    ls2[c->var] = evalExp(c->e1, ls);
    eps(cmd::done(), std::move(ls2));
    break;
  }

  case CmdTag::GlobalWrite: {
    ThreadStep s;
    s.label.k = StepLabel::K::Mem;
    s.label.proto = Action::write(resolveLoc(locs, c->gname),
                                  evalExp(c->e1, ls), c->mode, t);
    s.label.vc = StepLabel::VC::Fixed;
    s.label.stmt = StmtKind::PlainWrite;
    s.rest = cmd::done();
    s.ls = ls;
    out.push_back(std::move(s));
    break;
  }

  case CmdTag::GlobalRead: {
    ThreadStep s;
    s.label.k = StepLabel::K::Mem;
    s.label.proto =
        Action::read(resolveLoc(locs, c->gname), Value::undef(), c->mode, t);
    s.label.vc = StepLabel::VC::AnyRead;
    s.label.stmt = StmtKind::PlainRead;
    s.label.bind = c->var;
    s.rest = cmd::done();
    s.ls = ls;
    out.push_back(std::move(s));
    break;
  }

  case CmdTag::Cas: {
    Location x = resolveLoc(locs, c->gname);
    Value expect = evalExp(c->e1, ls);
    Value desired = evalExp(c->e2, ls);
    // success: an update reading exactly `expect`
    {
      ThreadStep s;
      s.label.k = StepLabel::K::Mem;
      s.label.proto = Action::update(x, expect, desired, c->mode, t);
      s.label.vc = StepLabel::VC::Fixed;
      s.label.stmt = StmtKind::CasSucc;
      s.label.aux = c->aux;
      s.label.auxVar = c->auxVar;
      s.rest = cmd::done();
      s.ls = ls;
      s.ls[c->var] = Value::boolean(true);
      out.push_back(std::move(s));
    }
    // failure: a relaxed read of any value != expect
    {
      ThreadStep s;
      s.label.k = StepLabel::K::Mem;
      s.label.proto = Action::read(x, Value::undef(), SyncMode::Relaxed, t);
      s.label.vc = StepLabel::VC::ReadNe;
      s.label.neq = expect;
      s.label.stmt = StmtKind::CasFail;
      s.rest = cmd::done();
      s.ls = ls;
      s.ls[c->var] = Value::boolean(false);
      out.push_back(std::move(s));
    }
    break;
  }

  case CmdTag::Fai: {
    ThreadStep s;
    s.label.k = StepLabel::K::Mem;
    s.label.proto = Action::update(resolveLoc(locs, c->gname), Value::undef(),
                                   Value::undef(), c->mode, t);
    s.label.vc = StepLabel::VC::AnyRead;
    s.label.faiIncrement = true;
    s.label.stmt = StmtKind::Fai;
    s.label.bind = c->var;
    s.rest = cmd::done();
    s.ls = ls;
    out.push_back(std::move(s));
    break;
  }

  case CmdTag::Seq: {
    if (c->c1->tag == CmdTag::Done || c->c1->tag == CmdTag::ValueTerm) {
      eps(c->c2, ls);
      break;
    }
    for (auto &s : threadSteps(c->c1, ls, locs, t)) {
      ThreadStep w = s;
      w.rest = cmd::seq(s.rest ? s.rest : s.rest, c->c2);
      out.push_back(std::move(w));
    }
    break;
  }

  case CmdTag::If: {
    bool b = evalExp(c->e1, ls).truthy();
    eps(b ? c->c1 : (c->c2 ? c->c2 : cmd::done()), ls);
    break;
  }

  case CmdTag::While: {
    if (evalExp(c->e1, ls).truthy()) {
      auto *s = eps(cmd::seq(c->c1, c), ls);
      s->label.loopEnter = c->site;
    } else {
      auto *s = eps(cmd::done(), ls);
      s->label.loopExit = c->site;
    }
    break;
  }

  case CmdTag::DoUntil: {
    auto guard = std::make_shared<Command>();
    guard->tag = CmdTag::UntilGuard;
    guard->e1 = c->e1;
    guard->c1 = c;
    guard->site = c->site;
    auto *s = eps(cmd::seq(c->c1, guard), ls);
    s->label.loopEnter = c->site;
    break;
  }

  case CmdTag::UntilGuard: {
    if (evalExp(c->e1, ls).truthy()) {
      auto *s = eps(cmd::done(), ls);
      s->label.loopExit = c->site;
    } else {
      eps(c->c1, ls); // back to the loop head; re-entry is counted there
    }
    break;
  }

  case CmdTag::MethodCall: {
    ThreadStep s;
    s.label.k = StepLabel::K::Obj;
    s.label.proto = methodProto(*c, resolveLoc(locs, c->obj), ls, t);
    s.label.stmt = StmtKind::Method;
    s.label.bind = c->var; // resolved result binding handled downstream
    s.rest = nullptr;      // combined semantics substitutes the return value
    s.ls = ls;
    out.push_back(std::move(s));
    break;
  }

  case CmdTag::Inlined: {
    if (c->c1->tag == CmdTag::Done || c->c1->tag == CmdTag::ValueTerm) {
      // closing step: bind the result and the reserved rval
      LocalEnv ls2 = ls;
      Value v = c->c1->tag == CmdTag::ValueTerm ? c->c1->cval : Value::undef();
      if (!c->var.empty()) ls2[c->var] = v;
      ls2["rval"] = v;
      eps(cmd::done(), std::move(ls2));
      break;
    }
    for (auto &s : threadSteps(c->c1, ls, locs, t)) {
      ThreadStep w = s;
      w.rest = cmd::inlined(s.rest, c->obj, c->method, c->var);
      out.push_back(std::move(w));
    }
    break;
  }

  case CmdTag::Return: {
    eps(cmd::valueTerm(evalExp(c->e1, ls)), ls);
    break;
  }

  case CmdTag::NewNode: {
    ThreadStep s;
    s.label.k = StepLabel::K::Alloc;
    s.label.allocVar = c->var;
    s.label.stmt = StmtKind::Alloc;
    s.rest = cmd::done();
    s.ls = ls;
    out.push_back(std::move(s));
    break;
  }

  case CmdTag::IndWrite: {
    Value addr = ls.count(c->var2) ? ls.at(c->var2) : Value::undef();
    if (!addr.isInt()) throw EvalError("indirect write through " + c->var2);
    ThreadStep s;
    s.label.k = StepLabel::K::Mem;
    s.label.proto = Action::write(
        resolveLoc(locs, std::to_string(addr.i + c->offset)),
        evalExp(c->e1, ls), c->mode, t);
    s.label.vc = StepLabel::VC::Fixed;
    s.label.stmt = StmtKind::PlainWrite;
    s.rest = cmd::done();
    s.ls = ls;
    out.push_back(std::move(s));
    break;
  }

  case CmdTag::IndRead: {
    Value addr = ls.count(c->var2) ? ls.at(c->var2) : Value::undef();
    if (!addr.isInt()) throw EvalError("indirect read through " + c->var2);
    ThreadStep s;
    s.label.k = StepLabel::K::Mem;
    s.label.proto =
        Action::read(resolveLoc(locs, std::to_string(addr.i + c->offset)),
                     Value::undef(), c->mode, t);
    s.label.vc = StepLabel::VC::AnyRead;
    s.label.stmt = StmtKind::PlainRead;
    s.label.bind = c->var;
    s.rest = cmd::done();
    s.ls = ls;
    out.push_back(std::move(s));
    break;
  }
  }
  return out;
}

} // namespace rarcheck
