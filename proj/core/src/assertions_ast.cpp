#include "rarcheck/assertions_ast.hpp"

#include "rarcheck/lang.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rarcheck {

namespace asrt {

namespace {
std::shared_ptr<Assertion> mk(Assertion::Tag t) {
  auto a = std::make_shared<Assertion>();
  a->tag = t;
  return a;
}
} // namespace

Asrt trueA() { return mk(Assertion::Tag::True); }
Asrt falseA() { return mk(Assertion::Tag::False); }
Asrt notA(Asrt x) {
  auto a = mk(Assertion::Tag::Not);
  a->kids = {std::move(x)};
  return a;
}
Asrt andA(std::vector<Asrt> kids) {
  if (kids.size() == 1) return kids[0];
  auto a = mk(Assertion::Tag::And);
  a->kids = std::move(kids);
  return a;
}
Asrt orA(std::vector<Asrt> kids) {
  if (kids.size() == 1) return kids[0];
  auto a = mk(Assertion::Tag::Or);
  a->kids = std::move(kids);
  return a;
}
Asrt implies(Asrt x, Asrt y) {
  auto a = mk(Assertion::Tag::Implies);
  a->kids = {std::move(x), std::move(y)};
  return a;
}
Asrt pcIn(int tid, std::vector<int> lines) {
  auto a = mk(Assertion::Tag::PcIn);
  a->tid = tid;
  a->pcSet = std::move(lines);
  return a;
}
Asrt localIn(std::string r, std::vector<Value> vals) {
  auto a = mk(Assertion::Tag::LocalIn);
  a->x = std::move(r);
  a->valSet = std::move(vals);
  return a;
}
Asrt localEq(std::string r, Value v) { return localIn(std::move(r), {v}); }
Asrt possibleVar(char comp, int tid, std::string x, Value u) {
  auto a = mk(Assertion::Tag::PossibleVar);
  a->comp = comp;
  a->tid = tid;
  a->x = std::move(x);
  a->u = u;
  return a;
}
Asrt definiteVar(char comp, int tid, std::string x, Value u) {
  auto a = mk(Assertion::Tag::DefiniteVar);
  a->comp = comp;
  a->tid = tid;
  a->x = std::move(x);
  a->u = u;
  return a;
}
Asrt possibleMeth(char comp, int tid, MethodPat m) {
  auto a = mk(Assertion::Tag::PossibleMeth);
  a->comp = comp;
  a->tid = tid;
  a->meth = std::move(m);
  return a;
}
Asrt definiteMeth(char comp, int tid, MethodPat m) {
  auto a = mk(Assertion::Tag::DefiniteMeth);
  a->comp = comp;
  a->tid = tid;
  a->meth = std::move(m);
  return a;
}
Asrt condVar(char cs, char ct, int tid, std::string x, Value u, std::string y,
             Value v) {
  auto a = mk(Assertion::Tag::CondVar);
  a->comp = cs;
  a->comp2 = ct;
  a->tid = tid;
  a->x = std::move(x);
  a->u = u;
  a->y = std::move(y);
  a->v = v;
  return a;
}
Asrt condMeth(char cs, char ct, int tid, MethodPat m, std::string y, Value v) {
  auto a = mk(Assertion::Tag::CondMeth);
  a->comp = cs;
  a->comp2 = ct;
  a->tid = tid;
  a->meth = std::move(m);
  a->y = std::move(y);
  a->v = v;
  return a;
}
Asrt coveredMeth(char comp, MethodPat m) {
  auto a = mk(Assertion::Tag::CoveredMeth);
  a->comp = comp;
  a->meth = std::move(m);
  return a;
}
Asrt cw(char comp, std::string x, Value u) {
  auto a = mk(Assertion::Tag::CW);
  a->comp = comp;
  a->x = std::move(x);
  a->u = u;
  return a;
}
Asrt hiddenMeth(char comp, MethodPat m) {
  auto a = mk(Assertion::Tag::HiddenMeth);
  a->comp = comp;
  a->meth = std::move(m);
  return a;
}

} // namespace asrt

// ---------------------------------------------------------------------------

namespace {

std::string printMeth(const MethodPat &m) {
  std::string s = m.obj + "." + m.method + "(";
  if (m.hasArg) s += m.arg.str();
  return s + ")";
}

std::string tname(int tid) { return "t" + std::to_string(tid); }

} // namespace

std::string printAssertion(const Asrt &a) {
  using T = Assertion::Tag;
  switch (a->tag) {
  case T::True: return "true";
  case T::False: return "false";
  case T::Not: return "!(" + printAssertion(a->kids[0]) + ")";
  case T::And: {
    std::string s;
    for (size_t i = 0; i < a->kids.size(); ++i)
      s += (i ? " && " : "") + ("(" + printAssertion(a->kids[i]) + ")");
    return s;
  }
  case T::Or: {
    std::string s;
    for (size_t i = 0; i < a->kids.size(); ++i)
      s += (i ? " || " : "") + ("(" + printAssertion(a->kids[i]) + ")");
    return s;
  }
  case T::Implies:
    return "(" + printAssertion(a->kids[0]) + ") => (" +
           printAssertion(a->kids[1]) + ")";
  case T::PcIn: {
    std::string s = "pc(" + tname(a->tid) + ") in {";
    for (size_t i = 0; i < a->pcSet.size(); ++i)
      s += (i ? "," : "") + std::to_string(a->pcSet[i]);
    return s + "}";
  }
  case T::LocalIn: {
    if (a->valSet.size() == 1) return a->x + " = " + a->valSet[0].str();
    std::string s = a->x + " in {";
    for (size_t i = 0; i < a->valSet.size(); ++i)
      s += (i ? "," : "") + a->valSet[i].str();
    return s + "}";
  }
  case T::PossibleVar:
    return "pos(" + std::string(1, a->comp) + ", " + tname(a->tid) + ", " +
           a->x + " = " + a->u.str() + ")";
  case T::DefiniteVar:
    return "def(" + std::string(1, a->comp) + ", " + tname(a->tid) + ", " +
           a->x + " = " + a->u.str() + ")";
  case T::PossibleMeth:
    return "pos(" + std::string(1, a->comp) + ", " + tname(a->tid) + ", " +
           printMeth(a->meth) + ")";
  case T::DefiniteMeth:
    return "def(" + std::string(1, a->comp) + ", " + tname(a->tid) + ", " +
           printMeth(a->meth) + ")";
  case T::CondVar:
    return "cond(" + std::string(1, a->comp) + "->" +
           std::string(1, a->comp2) + ", " + tname(a->tid) + ", " + a->x +
           " = " + a->u.str() + " => " + a->y + " = " + a->v.str() + ")";
  case T::CondMeth:
    return "cond(" + std::string(1, a->comp) + "->" +
           std::string(1, a->comp2) + ", " + tname(a->tid) + ", " +
           printMeth(a->meth) + " => " + a->y + " = " + a->v.str() + ")";
  case T::CoveredMeth:
    return "covered(" + std::string(1, a->comp) + ", " + printMeth(a->meth) +
           ")";
  case T::CW:
    return "cw(" + std::string(1, a->comp) + ", " + a->x + ", " + a->u.str() +
           ")";
  case T::HiddenMeth:
    return "hidden(" + std::string(1, a->comp) + ", " + printMeth(a->meth) +
           ")";
  }
  return "true";
}

// ---------------------------------------------------------------------------
// Assertion surface parser.

namespace {

struct ALex {
  std::string s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(const std::string &tok) {
    ws();
    if (s.compare(i, tok.size(), tok) == 0) {
      // identifiers must not run on
      if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        size_t j = i + tok.size();
        if (j < s.size() &&
            (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
          return false;
      }
      i += tok.size();
      return true;
    }
    return false;
  }
  bool peek(const std::string &tok) {
    size_t save = i;
    bool ok = eat(tok);
    i = save;
    return ok;
  }
  std::string ident() {
    ws();
    size_t j = i;
    while (j < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      ++j;
    if (j == i) fail("identifier expected");
    std::string out = s.substr(i, j - i);
    i = j;
    return out;
  }
  long long integer() {
    ws();
    size_t j = i;
    bool neg = false;
    if (j < s.size() && s[j] == '-') {
      neg = true;
      ++j;
    }
    size_t k = j;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (k == j) fail("integer expected");
    long long v = std::stoll(s.substr(j, k - j));
    i = k;
    return neg ? -v : v;
  }
  [[noreturn]] void fail(const std::string &msg) {
    throw ParseError("assertion: " + msg + " near '" + s.substr(i, 24) + "'",
                     1, static_cast<int>(i + 1));
  }
};

struct AParser {
  ALex lx;
  const std::vector<std::string> &threads;

  int tidOf(const std::string &name) {
    for (size_t k = 0; k < threads.size(); ++k)
      if (threads[k] == name) return static_cast<int>(k) + 1;
    lx.fail("unknown thread " + name);
  }

  Value value() {
    if (lx.eat("true")) return Value::boolean(true);
    if (lx.eat("false")) return Value::boolean(false);
    if (lx.eat("empty")) return Value::empty();
    if (lx.eat("null")) return Value::integer(0);
    if (lx.eat("undef")) return Value::undef();
    return Value::integer(lx.integer());
  }

  std::vector<Value> valueSet() {
    std::vector<Value> out;
    if (!lx.eat("{")) lx.fail("'{' expected");
    if (!lx.peek("}")) {
      out.push_back(value());
      while (lx.eat(",")) out.push_back(value());
    }
    if (!lx.eat("}")) lx.fail("'}' expected");
    return out;
  }

  char comp() {
    if (lx.eat("C")) return 'C';
    if (lx.eat("L")) return 'L';
    lx.fail("component tag C or L expected");
  }

  MethodPat methPat(std::string obj) {
    MethodPat m;
    m.obj = std::move(obj);
    m.method = lx.ident();
    if (!lx.eat("(")) lx.fail("'(' expected in method pattern");
    if (!lx.peek(")")) {
      m.hasArg = true;
      m.arg = value();
    }
    if (!lx.eat(")")) lx.fail("')' expected in method pattern");
    return m;
  }

  // Either `x = u` (var) or `o.m(v)` (method).
  struct Body {
    bool isMeth = false;
    std::string x;
    Value u;
    MethodPat m;
  };

  Body body() {
    Body b;
    std::string id = lx.ident();
    if (lx.eat(".")) {
      b.isMeth = true;
      b.m = methPat(id);
    } else {
      if (!lx.eat("=")) lx.fail("'=' expected");
      b.x = id;
      b.u = value();
    }
    return b;
  }

  Asrt primary() {
    if (lx.eat("true")) return asrt::trueA();
    if (lx.eat("false")) return asrt::falseA();
    if (lx.eat("!")) return asrt::notA(primary());
    if (lx.eat("(")) {
      Asrt a = assertion();
      if (!lx.eat(")")) lx.fail("')' expected");
      return a;
    }
    if (lx.eat("exists")) {
      // expanded at parse time into a disjunction over the value set
      std::string var = lx.ident();
      if (!lx.eat("in")) lx.fail("'in' expected");
      auto dom = valueSet();
      if (!lx.eat(":")) lx.fail("':' expected");
      lx.ws();
      if (lx.i >= lx.s.size() || lx.s[lx.i] != '(')
        lx.fail("parenthesised body expected after 'exists'");
      size_t start = lx.i + 1;
      int depth = 1;
      size_t j = start;
      while (j < lx.s.size() && depth > 0) {
        if (lx.s[j] == '(') ++depth;
        if (lx.s[j] == ')') --depth;
        ++j;
      }
      if (depth != 0) lx.fail("unbalanced parentheses in exists body");
      std::string body = lx.s.substr(start, j - 1 - start);
      lx.i = j;
      std::vector<Asrt> kids;
      for (const Value &val : dom) {
        std::string sub;
        for (size_t k = 0; k < body.size();) {
          if ((std::isalpha(static_cast<unsigned char>(body[k])) ||
               body[k] == '_')) {
            size_t e = k;
            while (e < body.size() &&
                   (std::isalnum(static_cast<unsigned char>(body[e])) ||
                    body[e] == '_'))
              ++e;
            std::string word = body.substr(k, e - k);
            sub += (word == var) ? val.str() : word;
            k = e;
          } else {
            sub += body[k++];
          }
        }
        kids.push_back(parseAssertion(sub, threads));
      }
      return asrt::orA(std::move(kids));
    }
    if (lx.eat("pc")) {
      if (!lx.eat("(")) lx.fail("'(' expected");
      int tid = tidOf(lx.ident());
      if (!lx.eat(")")) lx.fail("')' expected");
      if (lx.eat("=")) return asrt::pcIn(tid, {(int)lx.integer()});
      if (!lx.eat("in")) lx.fail("'in' or '=' expected after pc()");
      if (!lx.eat("{")) lx.fail("'{' expected");
      std::vector<int> set;
      set.push_back((int)lx.integer());
      while (lx.eat(",")) set.push_back((int)lx.integer());
      if (!lx.eat("}")) lx.fail("'}' expected");
      return asrt::pcIn(tid, set);
    }
    std::string kw;
    for (const char *k : {"pos", "def", "cond", "covered", "cw", "hidden"}) {
      if (lx.peek(k)) {
        kw = k;
        lx.eat(k);
        break;
      }
    }
    if (!kw.empty()) {
      if (!lx.eat("(")) lx.fail("'(' expected after " + kw);
      Asrt out;
      if (kw == "pos" || kw == "def") {
        char c = comp();
        if (!lx.eat(",")) lx.fail("',' expected");
        int tid = tidOf(lx.ident());
        if (!lx.eat(",")) lx.fail("',' expected");
        Body b = body();
        if (kw == "pos")
          out = b.isMeth ? asrt::possibleMeth(c, tid, b.m)
                         : asrt::possibleVar(c, tid, b.x, b.u);
        else
          out = b.isMeth ? asrt::definiteMeth(c, tid, b.m)
                         : asrt::definiteVar(c, tid, b.x, b.u);
      } else if (kw == "cond") {
        char cs = comp();
        if (!lx.eat("->")) lx.fail("'->' expected");
        char ct = comp();
        if (!lx.eat(",")) lx.fail("',' expected");
        int tid = tidOf(lx.ident());
        if (!lx.eat(",")) lx.fail("',' expected");
        Body src = body();
        if (!lx.eat("=>")) lx.fail("'=>' expected");
        std::string y = lx.ident();
        if (!lx.eat("=")) lx.fail("'=' expected");
        Value v = value();
        out = src.isMeth ? asrt::condMeth(cs, ct, tid, src.m, y, v)
                         : asrt::condVar(cs, ct, tid, src.x, src.u, y, v);
      } else if (kw == "covered" || kw == "hidden") {
        char c = comp();
        if (!lx.eat(",")) lx.fail("',' expected");
        MethodPat m = methPat(lx.ident());
        out = kw == "covered" ? asrt::coveredMeth(c, m) : asrt::hiddenMeth(c, m);
      } else if (kw == "cw") {
        char c = comp();
        if (!lx.eat(",")) lx.fail("',' expected");
        std::string x = lx.ident();
        if (!lx.eat(",")) lx.fail("',' expected");
        out = asrt::cw(c, x, value());
      } else {
        lx.fail("unknown assertion form " + kw);
      }
      if (!lx.eat(")")) lx.fail("')' expected");
      return out;
    }
    // bare local comparison: r = v | r in {..}
    std::string id = lx.ident();
    if (lx.eat("=")) return asrt::localEq(id, value());
    if (lx.eat("in")) return asrt::localIn(id, valueSet());
    lx.fail("'=' or 'in' expected after " + id);
  }

  Asrt conjunction() {
    std::vector<Asrt> kids{primary()};
    while (lx.eat("&&")) kids.push_back(primary());
    return asrt::andA(std::move(kids));
  }

  Asrt disjunction() {
    std::vector<Asrt> kids{conjunction()};
    while (lx.eat("||")) kids.push_back(conjunction());
    return asrt::orA(std::move(kids));
  }

  Asrt assertion() {
    Asrt a = disjunction();
    if (lx.eat("=>")) return asrt::implies(a, assertion());
    return a;
  }
};

} // namespace

Asrt parseAssertion(const std::string &text,
                    const std::vector<std::string> &threadNames) {
  AParser p{ALex{text}, threadNames};
  Asrt a = p.assertion();
  p.lx.ws();
  if (p.lx.i != p.lx.s.size()) p.lx.fail("trailing input");
  return a;
}

} // namespace rarcheck
