#ifndef RARCHECK_ASSERTIONS_AST_HPP
#define RARCHECK_ASSERTIONS_AST_HPP

#include "rarcheck/value.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rarcheck {

struct Assertion;
using Asrt = std::shared_ptr<const Assertion>;

/// Names a method-call action pattern inside an assertion, e.g.
/// `l.release(2)`, `s.pop(empty)`, `l.init()`.
struct MethodPat {
  std::string obj;
  std::string method; // init | acquire | release | enq | deq | push | pop
  bool hasArg = false;
  Value arg; // popped/pushed value, or lock index as an Int
};

struct Assertion {
  enum class Tag {
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    PcIn,      // pc(t) in {..}
    LocalIn,   // r in {..} (equality is a singleton set)
    PossibleVar,  // pos(X, t, x = u)
    DefiniteVar,  // def(X, t, x = u)
    PossibleMeth, // pos(X, t, o.m(v))
    DefiniteMeth, // def(X, t, o.m(v))
    CondVar,      // cond(X->Y, t, x = u => y = v)
    CondMeth,     // cond(X->Y, t, o.m(u) => y = v)
    CoveredMeth,  // covered(X, o.m(v))
    CW,           // cw(X, x, u)
    HiddenMeth,   // hidden(X, o.m(v))
  };

  Tag tag = Tag::True;
  char comp = 'C';  // component of the primary state ('C' or 'L')
  char comp2 = 'C'; // target component of a conditional observation
  int tid = 0;
  std::string x; // source variable
  std::string y; // target variable (conditional forms)
  Value u, v;
  MethodPat meth;
  std::vector<Asrt> kids;
  std::string bindVar;
  std::vector<Value> valSet;
  std::vector<int> pcSet;
};

namespace asrt {
Asrt trueA();
Asrt falseA();
Asrt notA(Asrt a);
Asrt andA(std::vector<Asrt> kids);
Asrt orA(std::vector<Asrt> kids);
Asrt implies(Asrt a, Asrt b);
Asrt pcIn(int tid, std::vector<int> lines);
Asrt localIn(std::string r, std::vector<Value> vals);
Asrt localEq(std::string r, Value v);
Asrt possibleVar(char comp, int tid, std::string x, Value u);
Asrt definiteVar(char comp, int tid, std::string x, Value u);
Asrt possibleMeth(char comp, int tid, MethodPat m);
Asrt definiteMeth(char comp, int tid, MethodPat m);
Asrt condVar(char compSrc, char compTgt, int tid, std::string x, Value u,
             std::string y, Value v);
Asrt condMeth(char compSrc, char compTgt, int tid, MethodPat m, std::string y,
              Value v);
Asrt coveredMeth(char comp, MethodPat m);
Asrt cw(char comp, std::string x, Value u);
Asrt hiddenMeth(char comp, MethodPat m);
} // namespace asrt

std::string printAssertion(const Asrt &a);

/// Parses the `{| ... |}` surface syntax (without the braces).
Asrt parseAssertion(const std::string &text,
                    const std::vector<std::string> &threadNames);

} // namespace rarcheck

#endif
