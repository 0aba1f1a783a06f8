#ifndef RARCHECK_LANG_HPP
#define RARCHECK_LANG_HPP

#include "rarcheck/assertions_ast.hpp"
#include "rarcheck/state.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rarcheck {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string &msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) +
                           ", column " + std::to_string(col)),
        line(line), col(col) {}
  int line;
  int col;
};

// ---------------------------------------------------------------------------
// Expressions over local variables and constants.

struct Exp;
using ExpP = std::shared_ptr<const Exp>;

struct Exp {
  enum class Tag {
    Const,
    Var,
    Not,
    Neg,
    Even,
    Add,
    Sub,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or
  };
  Tag tag = Tag::Const;
  Value cval;
  std::string var;
  ExpP a, b;

  static ExpP constant(Value v);
  static ExpP local(std::string name);
  static ExpP unary(Tag t, ExpP e);
  static ExpP binary(Tag t, ExpP l, ExpP r);
};

using LocalEnv = std::map<std::string, Value>;

Value evalExp(const ExpP &e, const LocalEnv &ls);
std::string printExp(const ExpP &e);
bool expEq(const ExpP &a, const ExpP &b);

// ---------------------------------------------------------------------------
// Commands.

enum class CmdTag {
  Done,
  ValueTerm,
  LocalAssign,
  GlobalWrite,
  GlobalRead,
  Cas,
  Fai,
  Seq,
  If,
  While,
  DoUntil,
  UntilGuard, // residual-only: guard evaluation point of a do-until
  MethodCall,
  Inlined, // residual/elaboration-only: a filled hole executing library code
  Return,
  NewNode,
  IndWrite,
  IndRead,
};

enum class CasAux { None, AddPushed, DelPushed };

struct Command {
  CmdTag tag = CmdTag::Done;
  std::string var;    // destination local
  std::string var2;   // address-holding local for indirect accesses
  std::string obj;    // object name (MethodCall / Inlined)
  std::string method; // method name
  std::string gname;  // global variable name
  ExpP e1, e2;
  Cmd c1, c2;
  SyncMode mode = SyncMode::Relaxed;
  int site = -1;   // loop site id
  int offset = 0;  // indirect-access field offset (0 = val, 1 = nxt)
  CasAux aux = CasAux::None;
  std::string auxVar;
  Value cval;
};

namespace cmd {
Cmd done();
Cmd valueTerm(Value v);
Cmd localAssign(std::string r, ExpP e);
Cmd globalWrite(std::string x, ExpP e, SyncMode m);
Cmd globalRead(std::string r, std::string x, SyncMode m);
Cmd cas(std::string r, std::string x, ExpP expect, ExpP desired, SyncMode m,
        CasAux aux = CasAux::None, std::string auxVar = "");
Cmd fai(std::string r, std::string x, SyncMode m);
Cmd seq(Cmd a, Cmd b);
Cmd ifElse(ExpP cond, Cmd thenC, Cmd elseC);
Cmd whileLoop(ExpP cond, Cmd body, int site);
Cmd doUntil(Cmd body, ExpP guard, int site);
Cmd methodCall(std::string obj, std::string method, ExpP arg, SyncMode m,
               std::string resultVar = "");
Cmd inlined(Cmd body, std::string obj, std::string method,
            std::string resultVar = "");
Cmd ret(ExpP e);
Cmd newNode(std::string r);
Cmd indWrite(std::string addrVar, int offset, ExpP e, SyncMode m);
Cmd indRead(std::string r, std::string addrVar, int offset, SyncMode m);
} // namespace cmd

bool cmdEq(const Cmd &a, const Cmd &b);
std::string printCmd(const Cmd &c, int indent = 0);

// ---------------------------------------------------------------------------
// Program specifications.

struct InitAssign {
  bool global = true;
  std::string name;
  Value v;
};

struct ObjectDecl {
  std::string name;
  std::string kind; // lock | queue | stack | seqlock | seqlock-rlx | ticketlock | treiber
};

struct ThreadSpec {
  std::string name;
  std::vector<Cmd> stmts;
  std::map<int, Asrt> annots; // 1-based statement line -> assertion
};

struct ProgramSpec {
  std::string name;
  std::vector<InitAssign> init;
  std::vector<ObjectDecl> objects;
  std::vector<ThreadSpec> threads;
  Asrt initially; // checked on the initial configuration
  Asrt invariant; // checked on every reachable configuration
  Asrt post;      // checked on terminal configurations
  int loopSites = 0;
};

ProgramSpec parseProgram(const std::string &text);
std::string pretty(const ProgramSpec &spec);
bool specEq(const ProgramSpec &a, const ProgramSpec &b);

// ---------------------------------------------------------------------------
// Elaborated, executable form.

enum class ObjectKind { Lock, Queue, Stack };

struct ObjectInfo {
  std::string name;
  std::string declaredKind;
  bool abstract = true;
  ObjectKind kind = ObjectKind::Lock; // semantics used when abstract
};

struct ExecProgram {
  ProgramSpec spec; // threads rewritten with implementation bodies inlined
  std::map<std::string, Location> locs;     // global name -> location
  std::map<std::string, ObjectInfo> objects;
  std::vector<InitAssign> libInit;          // implementation library variables
  int treiberNodes = 0;                     // preallocated node count
};

/// Resolves objects, inlines implementation bodies into holes and computes
/// the location vocabulary.
ExecProgram elaborate(const ProgramSpec &spec);

/// Drops abstract-only result binders from lock acquires; used to build the
/// common client template for refinement checking.
ProgramSpec stripAcquireBinders(const ProgramSpec &spec);

/// Rebinds the (single) object declaration to another kind.
ProgramSpec withObjectKind(const ProgramSpec &spec, const std::string &kind);

// ---------------------------------------------------------------------------
// Thread-local small-step semantics.

enum class StmtKind {
  None,
  PlainRead,
  PlainWrite,
  CasSucc,
  CasFail,
  Fai,
  Method,
  Alloc,
};

struct StepLabel {
  enum class K { Eps, Mem, Obj, Alloc } k = K::Eps;
  Action proto; // value slots may be unresolved
  enum class VC { Fixed, AnyRead, ReadNe } vc = VC::Fixed;
  bool faiIncrement = false; // write value = read value + 1
  Value neq;                 // ReadNe constraint
  StmtKind stmt = StmtKind::None;
  int loopEnter = -1; // loop site whose iteration count this step consumes
  int loopExit = -1;  // loop site left behind (counter reset)
  CasAux aux = CasAux::None;
  std::string auxVar;
  std::string bind; // local that receives the resolved read value
  std::string allocVar;
};

struct ThreadStep {
  StepLabel label;
  Cmd rest;
  LocalEnv ls;
};

/// All program-level steps of one thread's residual command. Read-like
/// labels are templates whose value slots the memory/object semantics
/// resolves downstream.
std::vector<ThreadStep> threadSteps(const Cmd &c, const LocalEnv &ls,
                                    const std::map<std::string, Location> &locs,
                                    Tid t);

} // namespace rarcheck

#endif
