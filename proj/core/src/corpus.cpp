#include "rarcheck/corpus.hpp"

#include <algorithm>
#include <map>

namespace rarcheck {

namespace {

const char *MP_UNSYNC = R"(# Unsynchronised message passing through a stack
init { d := 0; }
object s : stack;
thread t1 {
  d := 5;
  s.push(1);
}
thread t2 {
  do { r1 := s.pop(); } until r1 = 1;
  r2 <- d;
}
post {| r2 = 0 || r2 = 5 |}
)";

const char *MP_SYNC = R"(# Publication via a synchronising stack, with its proof outline
init { d := 0; }
object s : stack;
thread t1 {
  {| !(pos(L, t2, s.pop(1))) && def(C, t1, d = 0) |}
  d := 5;
  {| !(pos(L, t2, s.pop(1))) && def(C, t1, d = 5) |}
  s.push^R(1);
}
thread t2 {
  {| cond(L->C, t2, s.pop(1) => d = 5) |}
  do { r1 := s.pop^A(); } until r1 = 1;
  {| def(C, t2, d = 5) |}
  r2 <- d;
}
initially {| def(C, t1, d = 0) && def(C, t2, d = 0) && def(L, t1, s.pop(empty)) && def(L, t2, s.pop(empty)) |}
post {| r2 = 5 |}
)";

const char *MP_REL_ACQ = R"(# Plain-variable release-acquire message passing
init { d := 0; f := 0; e := 0; }
thread t1 {
  d := 5;
  f :=^R 1;
  e := 7;
}
thread t2 {
  do { r1 <-^A f; } until r1 = 1;
  r2 <- d;
}
post {| r2 = 5 |}
)";

// The lock client and its outline. P/Q names follow the roles in the
// per-line assertions; the global invariant carries mutual exclusion and
// the acquire-version disjunction.
const char *CLIENT_LOCK = R"(# Two critical sections synchronised by an abstract lock
init { d1 := 0; d2 := 0; local rl := 1; }
object l : lock;
thread t1 {
  {| def(C, t1, d1 = 0) && def(C, t1, d2 = 0) && (pc(t2) = 1 => def(L, t1, l.init(0)) && def(L, t2, l.init(0))) && (pc(t2) in {2,3,4} => covered(L, l.acquire(1))) |}
  l.acquire();
  {| def(C, t1, d1 = 0) && def(C, t1, d2 = 0) && (pc(t2) = 1 => !(pos(L, t2, l.release(2)))) && hidden(L, l.init(0)) |}
  d1 := 5;
  {| def(C, t1, d1 = 5) && def(C, t1, d2 = 0) && (pc(t2) = 1 => !(pos(L, t2, l.release(2)))) && hidden(L, l.init(0)) |}
  d2 := 5;
  {| def(C, t1, d1 = 5) && def(C, t1, d2 = 5) && (pc(t2) = 1 => !(pos(L, t2, l.release(2)))) && hidden(L, l.init(0)) |}
  l.release();
}
thread t2 {
  {| (!(pc(t1) in {2,3,4}) => (def(L, t2, l.init(0)) && def(C, t2, d1 = 0) && def(C, t2, d2 = 0)) || (pc(t1) = 5 && cond(L->C, t2, l.release(2) => d1 = 5) && cond(L->C, t2, l.release(2) => d2 = 5))) && (pc(t1) = 1 => def(L, t1, l.init(0))) && (pc(t1) = 5 => hidden(L, l.init(0))) |}
  rl := l.acquire();
  {| (rl = 1 => def(C, t2, d1 = 0) && def(C, t2, d2 = 0)) && (rl = 3 => def(C, t2, d1 = 5) && def(C, t2, d2 = 5)) |}
  r1 <- d1;
  {| (rl = 1 => r1 = 0 && def(C, t2, d2 = 0)) && (rl = 3 => r1 = 5 && def(C, t2, d2 = 5)) |}
  r2 <- d2;
  {| (rl = 1 => r1 = 0 && r2 = 0) && (rl = 3 => r1 = 5 && r2 = 5) |}
  l.release();
}
invariant {| !(pc(t1) in {2,3,4} && pc(t2) in {2,3,4}) && rl in {1,3} |}
post {| (r1 = 0 && r2 = 0) || (r1 = 5 && r2 = 5) |}
)";

// Same client, but thread 2's acquire demoted to a non-synchronising
// acquire: mutual exclusion survives, write visibility does not.
const char *CLIENT_LOCK_MUTANT = R"(# Lock client with a non-synchronising acquire in thread 2
init { d1 := 0; d2 := 0; local rl := 1; }
object l : lock;
thread t1 {
  l.acquire();
  d1 := 5;
  d2 := 5;
  l.release();
}
thread t2 {
  rl := l.acquire^rlx();
  {| (rl = 1 => def(C, t2, d1 = 0) && def(C, t2, d2 = 0)) && (rl = 3 => def(C, t2, d1 = 5) && def(C, t2, d2 = 5)) |}
  r1 <- d1;
  r2 <- d2;
  l.release();
}
invariant {| !(pc(t1) in {2,3,4} && pc(t2) in {2,3,4}) && rl in {1,3} |}
)";

// Rule-check workhorse: three threads, four critical sections.
const char *LOCK_RULES = R"(# Three-thread lock client exercising longer lock histories
init { d1 := 0; }
object l : lock;
thread t1 {
  l.acquire();
  d1 := 5;
  l.release();
  l.acquire();
  l.release();
}
thread t2 {
  l.acquire();
  r1 <- d1;
  l.release();
}
thread t3 {
  l.acquire();
  l.release();
}
)";

const char *TREIBER = R"(# Treiber stack under the message-passing client
init { d := 0; }
object s : treiber;
thread t1 {
  d := 5;
  s.push^R(1);
}
thread t2 {
  do { r1 := s.pop^A(); } until r1 = 1;
  r2 <- d;
}
post {| r2 = 5 |}
)";

const char *QUEUE_TWO = R"(# Two-thread enqueue/dequeue exchange
init { }
object q : queue;
thread t1 {
  q.enq^R(1);
  q.enq(2);
}
thread t2 {
  r1 := q.deq^A();
  r2 := q.deq();
}
)";

std::set<std::vector<Value>> finals(
    std::initializer_list<std::initializer_list<Value>> rows) {
  std::set<std::vector<Value>> out;
  for (const auto &r : rows) out.insert(std::vector<Value>(r));
  return out;
}

Value I(long long v) { return Value::integer(v); }
Value E() { return Value::empty(); }

std::map<std::string, CorpusEntry> buildCorpus() {
  std::map<std::string, CorpusEntry> out;

  auto add = [&](CorpusEntry e) {
    std::string name = e.name;
    out.emplace(std::move(name), std::move(e));
  };

  {
    CorpusEntry e;
    e.name = "mp-unsync";
    e.summary = "unsynchronised message passing via a relaxed stack";
    e.spec = parseProgram(MP_UNSYNC);
    e.spec.name = e.name;
    e.finalVars = {"r1", "r2"};
    e.expectedFinals = finals({{I(1), I(0)}, {I(1), I(5)}});
    e.expectOutlineValid = true; // post only
    e.checkLifo = true;
    e.loopBound = 2;
    e.refinements = {{"stack", "stack", true}};
    add(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "mp-sync";
    e.summary = "publication via releasing push / acquiring pop";
    e.spec = parseProgram(MP_SYNC);
    e.spec.name = e.name;
    e.finalVars = {"r1", "r2"};
    e.expectedFinals = finals({{I(1), I(5)}});
    e.expectOutlineValid = true;
    e.checkLifo = true;
    e.loopBound = 2;
    e.refinements = {{"stack", "stack", true}, {"stack", "treiber", true}};
    add(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "mp-rel-acq";
    e.summary = "release-acquire message passing on plain variables";
    e.spec = parseProgram(MP_REL_ACQ);
    e.spec.name = e.name;
    e.finalVars = {"r1", "r2"};
    e.expectedFinals = finals({{I(1), I(5)}});
    e.expectOutlineValid = true;
    e.loopBound = 2;
    add(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "client-lock";
    e.summary = "lock-synchronised write visibility with its proof outline";
    e.spec = parseProgram(CLIENT_LOCK);
    e.spec.name = e.name;
    e.finalVars = {"r1", "r2"};
    e.expectedFinals = finals({{I(0), I(0)}, {I(5), I(5)}});
    e.expectOutlineValid = true;
    e.refinements = {{"lock", "lock", true},
                     {"lock", "seqlock", true},
                     {"lock", "ticketlock", true},
                     {"lock", "seqlock-rlx", false}};
    add(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "client-lock-mutant";
    e.summary = "lock client with thread 2's acquire left unsynchronised";
    e.spec = parseProgram(CLIENT_LOCK_MUTANT);
    e.spec.name = e.name;
    e.finalVars = {"r1", "r2"};
    e.expectOutlineValid = false; // write visibility fails
    add(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "lock-rules";
    e.summary = "three-thread lock client for the Hoare-rule corpus";
    e.spec = parseProgram(LOCK_RULES);
    e.spec.name = e.name;
    e.expectOutlineValid = true;
    e.refinements = {{"lock", "lock", true}};
    add(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "treiber";
    e.summary = "translated Treiber stack under the MP client";
    e.spec = parseProgram(TREIBER);
    e.spec.name = e.name;
    e.finalVars = {"r1", "r2"};
    e.expectedFinals = finals({{I(1), I(5)}});
    e.expectOutlineValid = true;
    e.checkTreiberInvariants = true;
    add(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "queue-two";
    e.summary = "two-thread queue exchange";
    e.spec = parseProgram(QUEUE_TWO);
    e.spec.name = e.name;
    e.finalVars = {"r1", "r2"};
    e.expectedFinals = finals({{E(), E()},
                               {E(), I(1)},
                               {I(1), E()},
                               {I(1), I(2)}});
    e.checkFifo = true;
    e.refinements = {{"queue", "queue", true}};
    add(std::move(e));
  }
  return out;
}

const std::map<std::string, CorpusEntry> &corpus() {
  static const std::map<std::string, CorpusEntry> c = buildCorpus();
  return c;
}

} // namespace

const CorpusEntry &builtin(const std::string &name) {
  const auto &c = corpus();
  auto it = c.find(name);
  if (it != c.end()) return it->second;
  std::string msg = "unknown builtin '" + name + "'; did you mean:";
  std::string stem = name.substr(0, std::min<size_t>(3, name.size()));
  for (const auto &[n, e] : c)
    if (!stem.empty() && n.find(stem) != std::string::npos) msg += " " + n;
  msg += " (try 'list')";
  throw UsageError(msg);
}

std::vector<std::string> builtinNames() {
  std::vector<std::string> out;
  for (const auto &[n, e] : corpus()) out.push_back(n);
  return out;
}

} // namespace rarcheck
