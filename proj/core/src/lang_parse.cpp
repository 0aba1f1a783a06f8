#include "rarcheck/lang.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace rarcheck {

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Tok {
  enum class K { Ident, Int, Sym, Annot, Eof } k = K::Eof;
  std::string text; // symbol text or identifier; Annot holds the raw body
  long long num = 0;
  int line = 1, col = 1;
};

struct Lexer {
  std::string src;
  size_t i = 0;
  int line = 1, col = 1;
  Tok tok;

  explicit Lexer(std::string s) : src(std::move(s)) { advance(); }

  void bump(size_t n = 1) {
    while (n--) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  }

  void skipWs() {
    for (;;) {
      while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i])))
        bump();
      if (i < src.size() && src[i] == '#') {
        while (i < src.size() && src[i] != '\n') bump();
        continue;
      }
      break;
    }
  }

  void advance() {
    skipWs();
    tok = Tok{};
    tok.line = line;
    tok.col = col;
    if (i >= src.size()) {
      tok.k = Tok::K::Eof;
      return;
    }
    char c = src[i];
    if (src.compare(i, 2, "{|") == 0) {
      size_t end = src.find("|}", i + 2);
      if (end == std::string::npos)
        throw ParseError("unterminated '{|' assertion", line, col);
      tok.k = Tok::K::Annot;
      tok.text = src.substr(i + 2, end - i - 2);
      bump(end + 2 - i);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_'))
        ++j;
      tok.k = Tok::K::Ident;
      tok.text = src.substr(i, j - i);
      bump(j - i);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      tok.k = Tok::K::Int;
      tok.num = std::stoll(src.substr(i, j - i));
      bump(j - i);
      return;
    }
    static const char *two[] = {":=", "<-", "&&", "||", "!=", "<=", ">=", "=>"};
    for (const char *t : two) {
      if (src.compare(i, 2, t) == 0) {
        tok.k = Tok::K::Sym;
        tok.text = t;
        bump(2);
        return;
      }
    }
    tok.k = Tok::K::Sym;
    tok.text = std::string(1, c);
    bump();
  }
};

struct Parser {
  Lexer lx;
  ProgramSpec spec;
  std::set<std::string> globals;
  std::set<std::string> objectNames;
  // raw annotations collected during parsing; resolved once thread names
  // are all known
  struct RawAnnot {
    enum class Where { Stmt, Initially, Invariant, Post } where;
    int thread = -1;
    int stmtLine = 0;
    std::string text;
    int line, col;
  };
  std::vector<RawAnnot> raw;

  explicit Parser(std::string text) : lx(std::move(text)) {}

  [[noreturn]] void fail(const std::string &msg) {
    throw ParseError(msg, lx.tok.line, lx.tok.col);
  }

  bool peekIdent(const std::string &s) {
    return lx.tok.k == Tok::K::Ident && lx.tok.text == s;
  }
  bool eatIdent(const std::string &s) {
    if (peekIdent(s)) {
      lx.advance();
      return true;
    }
    return false;
  }
  bool peekSym(const std::string &s) {
    return lx.tok.k == Tok::K::Sym && lx.tok.text == s;
  }
  bool eatSym(const std::string &s) {
    if (peekSym(s)) {
      lx.advance();
      return true;
    }
    return false;
  }
  void expectSym(const std::string &s) {
    if (!eatSym(s)) fail("expected '" + s + "'");
  }
  std::string ident() {
    if (lx.tok.k != Tok::K::Ident) fail("identifier expected");
    std::string s = lx.tok.text;
    lx.advance();
    return s;
  }
  long long integer() {
    bool neg = eatSym("-");
    if (lx.tok.k != Tok::K::Int) fail("integer expected");
    long long v = lx.tok.num;
    lx.advance();
    return neg ? -v : v;
  }

  SyncMode modeSuffixOpt(bool &explicitRlx) {
    explicitRlx = false;
    if (!peekSym("^")) return SyncMode::Relaxed;
    lx.advance();
    std::string m = ident();
    if (m == "R") return SyncMode::Release;
    if (m == "A") return SyncMode::Acquire;
    if (m == "RA") return SyncMode::RelAcq;
    if (m == "rlx") {
      explicitRlx = true;
      return SyncMode::Relaxed;
    }
    fail("unknown sync annotation ^" + m);
  }
  SyncMode modeOpt() {
    bool rlx;
    return modeSuffixOpt(rlx);
  }

  // ---- expressions ----------------------------------------------------

  Value constVal() {
    if (eatIdent("true")) return Value::boolean(true);
    if (eatIdent("false")) return Value::boolean(false);
    if (eatIdent("empty")) return Value::empty();
    if (eatIdent("null")) return Value::integer(0);
    if (eatIdent("undef")) return Value::undef();
    return Value::integer(integer());
  }

  ExpP primaryExp() {
    if (eatSym("(")) {
      ExpP e = expr();
      expectSym(")");
      return e;
    }
    if (eatSym("!")) return Exp::unary(Exp::Tag::Not, primaryExp());
    if (eatSym("-")) return Exp::unary(Exp::Tag::Neg, primaryExp());
    if (eatIdent("even")) {
      expectSym("(");
      ExpP e = expr();
      expectSym(")");
      return Exp::unary(Exp::Tag::Even, e);
    }
    if (lx.tok.k == Tok::K::Int || peekIdent("true") || peekIdent("false") ||
        peekIdent("empty") || peekIdent("null") || peekIdent("undef"))
      return Exp::constant(constVal());
    return Exp::local(ident());
  }

  ExpP addExp() {
    ExpP e = primaryExp();
    for (;;) {
      if (eatSym("+"))
        e = Exp::binary(Exp::Tag::Add, e, primaryExp());
      else if (eatSym("-"))
        e = Exp::binary(Exp::Tag::Sub, e, primaryExp());
      else
        return e;
    }
  }

  ExpP cmpExp() {
    ExpP e = addExp();
    if (eatSym("=")) return Exp::binary(Exp::Tag::Eq, e, addExp());
    if (eatSym("!=")) return Exp::binary(Exp::Tag::Ne, e, addExp());
    if (eatSym("<=")) return Exp::binary(Exp::Tag::Le, e, addExp());
    if (eatSym("<")) return Exp::binary(Exp::Tag::Lt, e, addExp());
    if (eatSym(">=")) return Exp::binary(Exp::Tag::Ge, e, addExp());
    if (eatSym(">")) return Exp::binary(Exp::Tag::Gt, e, addExp());
    return e;
  }

  ExpP expr() {
    ExpP e = cmpExp();
    for (;;) {
      if (eatSym("&&"))
        e = Exp::binary(Exp::Tag::And, e, cmpExp());
      else if (eatSym("||"))
        e = Exp::binary(Exp::Tag::Or, e, cmpExp());
      else
        return e;
    }
  }

  // ---- statements ------------------------------------------------------

  Cmd block(int threadIdx) {
    expectSym("{");
    std::vector<Cmd> stmts;
    while (!peekSym("}")) stmts.push_back(statement(threadIdx));
    expectSym("}");
    if (stmts.empty()) return cmd::done();
    Cmd c = stmts.back();
    for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it)
      c = cmd::seq(*it, c);
    return c;
  }

  Cmd methodCallStmt(std::string obj, std::string resultVar) {
    expectSym(".");
    std::string method = ident();
    bool rlx = false;
    SyncMode m = modeSuffixOpt(rlx);
    if (method == "acquire" && !rlx && m == SyncMode::Relaxed)
      m = SyncMode::RelAcq; // locks synchronise by default
    if (method == "release" && !rlx && m == SyncMode::Relaxed)
      m = SyncMode::RelAcq;
    expectSym("(");
    ExpP arg;
    if (!peekSym(")")) arg = expr();
    expectSym(")");
    expectSym(";");
    return cmd::methodCall(std::move(obj), method, arg, m,
                           std::move(resultVar));
  }

  Cmd statement(int threadIdx) {
    if (eatIdent("skip")) {
      expectSym(";");
      return cmd::done();
    }
    if (eatIdent("if")) {
      ExpP cond = expr();
      Cmd thenC = block(threadIdx);
      Cmd elseC = cmd::done();
      if (eatIdent("else")) elseC = block(threadIdx);
      return cmd::ifElse(cond, thenC, elseC);
    }
    if (eatIdent("while")) {
      ExpP cond = expr();
      int site = spec.loopSites++;
      Cmd body = block(threadIdx);
      return cmd::whileLoop(cond, body, site);
    }
    if (eatIdent("do")) {
      int site = spec.loopSites++;
      Cmd body = block(threadIdx);
      if (!eatIdent("until")) fail("'until' expected");
      ExpP guard = expr();
      expectSym(";");
      return cmd::doUntil(body, guard, site);
    }

    std::string id = ident();
    if (peekSym(".")) {
      if (!objectNames.count(id)) fail("unknown object " + id);
      return methodCallStmt(id, "");
    }
    if (eatSym(":=")) {
      SyncMode m = modeOpt(); // `x :=^R e`
      if (peekIdent("CAS")) {
        if (m != SyncMode::Relaxed) fail("annotate CAS itself, not ':='");
        lx.advance();
        SyncMode cm = modeOpt();
        if (cm != SyncMode::Release && cm != SyncMode::RelAcq)
          fail("CAS must be annotated ^R or ^RA in this fragment");
        expectSym("(");
        std::string x = ident();
        if (!globals.count(x)) fail("CAS on undeclared global " + x);
        expectSym(",");
        ExpP expect = expr();
        expectSym(",");
        ExpP desired = expr();
        expectSym(")");
        CasAux aux = CasAux::None;
        std::string auxVar;
        if (eatSym("@")) {
          std::string tag = ident();
          if (tag == "add_pushed")
            aux = CasAux::AddPushed;
          else if (tag == "del_pushed")
            aux = CasAux::DelPushed;
          else
            fail("unknown CAS auxiliary @" + tag);
          expectSym("(");
          auxVar = ident();
          expectSym(")");
        }
        expectSym(";");
        return cmd::cas(id, x, expect, desired, cm, aux, auxVar);
      }
      if (peekIdent("FAI")) {
        if (m != SyncMode::Relaxed) fail("annotate FAI itself, not ':='");
        lx.advance();
        SyncMode fm = modeOpt();
        if (fm == SyncMode::Relaxed) fm = SyncMode::RelAcq;
        if (fm != SyncMode::RelAcq)
          fail("FAI is a release-acquire update in this fragment");
        expectSym("(");
        std::string x = ident();
        if (!globals.count(x)) fail("FAI on undeclared global " + x);
        expectSym(")");
        expectSym(";");
        return cmd::fai(id, x, fm);
      }
      if (peekIdent("newnode")) {
        if (m != SyncMode::Relaxed) fail("newnode takes no annotation");
        lx.advance();
        expectSym("(");
        expectSym(")");
        expectSym(";");
        return cmd::newNode(id);
      }
      if (lx.tok.k == Tok::K::Ident && objectNames.count(lx.tok.text)) {
        if (m != SyncMode::Relaxed) fail("annotate the method, not ':='");
        std::string obj = ident();
        return methodCallStmt(obj, id);
      }
      ExpP e = expr();
      expectSym(";");
      if (globals.count(id)) return cmd::globalWrite(id, e, m);
      if (m != SyncMode::Relaxed)
        fail("sync annotation on local assignment to " + id);
      return cmd::localAssign(id, e);
    }
    if (eatSym("<-")) {
      SyncMode m = modeOpt(); // r <-^A x
      std::string x = ident();
      expectSym(";");
      if (!globals.count(x)) fail("read of undeclared global " + x);
      return cmd::globalRead(id, x, m);
    }
    fail("statement expected after " + id);
  }

  void parseInit() {
    expectSym("{");
    while (!peekSym("}")) {
      bool isLocal = eatIdent("local");
      std::string name = ident();
      expectSym(":=");
      Value v = constVal();
      expectSym(";");
      for (const auto &ia : spec.init)
        if (ia.name == name)
          fail((ia.global ? "duplicate init of " : "duplicate local init of ") +
               name);
      spec.init.push_back(InitAssign{!isLocal, name, v});
      if (!isLocal) globals.insert(name);
    }
    expectSym("}");
  }

  ProgramSpec run() {
    bool sawInit = false;
    while (lx.tok.k != Tok::K::Eof) {
      if (eatIdent("init")) {
        if (sawInit) fail("duplicate init block");
        sawInit = true;
        parseInit();
        continue;
      }
      if (eatIdent("object")) {
        std::string name = ident();
        expectSym(":");
        std::string kind = ident();
        if (eatSym("-")) kind += "-" + ident(); // seqlock-rlx
        expectSym(";");
        static const std::set<std::string> kinds = {
            "lock", "queue", "stack", "seqlock", "seqlock-rlx", "ticketlock",
            "treiber"};
        if (!kinds.count(kind)) fail("unknown object kind " + kind);
        if (!objectNames.insert(name).second)
          fail("duplicate object " + name);
        spec.objects.push_back(ObjectDecl{name, kind});
        continue;
      }
      if (eatIdent("thread")) {
        ThreadSpec th;
        th.name = ident();
        int idx = static_cast<int>(spec.threads.size());
        expectSym("{");
        while (!peekSym("}")) {
          if (lx.tok.k == Tok::K::Annot) {
            RawAnnot ra;
            ra.where = RawAnnot::Where::Stmt;
            ra.thread = idx;
            ra.stmtLine = static_cast<int>(th.stmts.size()) + 1;
            ra.text = lx.tok.text;
            ra.line = lx.tok.line;
            ra.col = lx.tok.col;
            raw.push_back(std::move(ra));
            lx.advance();
            continue;
          }
          th.stmts.push_back(statement(idx));
        }
        expectSym("}");
        for (const auto &ra : raw)
          if (ra.thread == idx && ra.stmtLine > (int)th.stmts.size())
            throw ParseError("annotation on nonexistent point", ra.line,
                             ra.col);
        spec.threads.push_back(std::move(th));
        continue;
      }
      auto topAnnot = [&](RawAnnot::Where w) {
        if (lx.tok.k != Tok::K::Annot) fail("'{|' assertion expected");
        RawAnnot ra;
        ra.where = w;
        ra.text = lx.tok.text;
        ra.line = lx.tok.line;
        ra.col = lx.tok.col;
        raw.push_back(std::move(ra));
        lx.advance();
      };
      if (eatIdent("initially")) {
        topAnnot(RawAnnot::Where::Initially);
        continue;
      }
      if (eatIdent("invariant")) {
        topAnnot(RawAnnot::Where::Invariant);
        continue;
      }
      if (eatIdent("post")) {
        topAnnot(RawAnnot::Where::Post);
        continue;
      }
      fail("top-level declaration expected");
    }

    std::vector<std::string> names;
    for (const auto &t : spec.threads) names.push_back(t.name);
    for (const auto &ra : raw) {
      Asrt a = parseAssertion(ra.text, names);
      switch (ra.where) {
      case RawAnnot::Where::Stmt:
        spec.threads[ra.thread].annots[ra.stmtLine] = a;
        break;
      case RawAnnot::Where::Initially: spec.initially = a; break;
      case RawAnnot::Where::Invariant: spec.invariant = a; break;
      case RawAnnot::Where::Post: spec.post = a; break;
      }
    }
    return std::move(spec);
  }
};

} // namespace

ProgramSpec parseProgram(const std::string &text) {
  Parser p(text);
  return p.run();
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {
void printStmts(std::ostringstream &os, const ThreadSpec &th) {
  for (size_t k = 0; k < th.stmts.size(); ++k) {
    auto it = th.annots.find(static_cast<int>(k) + 1);
    if (it != th.annots.end())
      os << "  {| " << printAssertion(it->second) << " |}\n";
    os << printCmd(th.stmts[k], 1) << "\n";
  }
}
} // namespace

std::string pretty(const ProgramSpec &spec) {
  std::ostringstream os;
  os << "init {\n";
  for (const auto &ia : spec.init)
    os << "  " << (ia.global ? "" : "local ") << ia.name << " := "
       << ia.v.str() << ";\n";
  os << "}\n";
  for (const auto &o : spec.objects)
    os << "object " << o.name << " : " << o.kind << ";\n";
  for (const auto &t : spec.threads) {
    os << "thread " << t.name << " {\n";
    printStmts(os, t);
    os << "}\n";
  }
  if (spec.initially)
    os << "initially {| " << printAssertion(spec.initially) << " |}\n";
  if (spec.invariant)
    os << "invariant {| " << printAssertion(spec.invariant) << " |}\n";
  if (spec.post) os << "post {| " << printAssertion(spec.post) << " |}\n";
  return os.str();
}

namespace {
bool asrtEq(const Asrt &a, const Asrt &b) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  return printAssertion(a) == printAssertion(b);
}
} // namespace

bool specEq(const ProgramSpec &a, const ProgramSpec &b) {
  if (a.init.size() != b.init.size() || a.objects.size() != b.objects.size() ||
      a.threads.size() != b.threads.size())
    return false;
  for (size_t i = 0; i < a.init.size(); ++i)
    if (a.init[i].global != b.init[i].global ||
        a.init[i].name != b.init[i].name || !(a.init[i].v == b.init[i].v))
      return false;
  for (size_t i = 0; i < a.objects.size(); ++i)
    if (a.objects[i].name != b.objects[i].name ||
        a.objects[i].kind != b.objects[i].kind)
      return false;
  for (size_t i = 0; i < a.threads.size(); ++i) {
    const auto &x = a.threads[i];
    const auto &y = b.threads[i];
    if (x.name != y.name || x.stmts.size() != y.stmts.size()) return false;
    for (size_t k = 0; k < x.stmts.size(); ++k)
      if (!cmdEq(x.stmts[k], y.stmts[k])) return false;
    if (x.annots.size() != y.annots.size()) return false;
    for (const auto &[line, asrt] : x.annots) {
      auto it = y.annots.find(line);
      if (it == y.annots.end() || !asrtEq(asrt, it->second)) return false;
    }
  }
  return asrtEq(a.initially, b.initially) && asrtEq(a.invariant, b.invariant) &&
         asrtEq(a.post, b.post);
}

} // namespace rarcheck
