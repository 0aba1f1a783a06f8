#ifndef RARCHECK_REFINE_HPP
#define RARCHECK_REFINE_HPP

#include "rarcheck/explore.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rarcheck {

/// Client-observable part of a configuration: client locals (plus rval) and
/// the client component state with cross-component view entries dropped.
struct ClientSnapshot {
  std::map<Tid, std::map<std::string, Value>> locals;
  CompState client;

  friend bool operator==(const ClientSnapshot &, const ClientSnapshot &) = default;
};

ClientSnapshot projectSnapshot(const Config &cfg);
std::string snapshotKey(const ClientSnapshot &s);

std::vector<ClientSnapshot>
projectClientTrace(const std::vector<Config> &execution);

std::vector<ClientSnapshot> removeStutter(const std::vector<ClientSnapshot> &tr);

/// State refinement: locals equal, covered sets equal, and per-thread
/// per-location observable sets of the concrete included in the abstract's,
/// ops compared by (action, per-location rank).
bool stateRefines(const ClientSnapshot &abs, const ClientSnapshot &conc);

struct RefinementCounterexample {
  std::vector<int> concretePath;         // config indices in the concrete graph
  std::vector<std::string> trace;        // stutter-free snapshot keys
  int failingIndex = 0;
  std::vector<std::string> frontier;     // unmatched abstract snapshot keys
};

struct RefinementResult {
  bool pass = true;
  std::optional<RefinementCounterexample> cex;
  long long exploredPairs = 0;
  bool truncated = false;
};

/// Decides bounded trace refinement (every stutter-free concrete client
/// trace pointwise refined by some abstract one) by a determinised
/// stutter-closed matching game over the two reachable graphs.
RefinementResult checkRefinement(const ProgramSpec &client,
                                 const std::string &abstractKind,
                                 const std::string &concreteKind,
                                 const Bounds &b);

/// Replays a counterexample path through a fresh exploration; returns true
/// when every edge exists and the snapshots agree.
bool replayCounterexample(const ProgramSpec &client,
                          const std::string &concreteKind, const Bounds &b,
                          const RefinementCounterexample &cex);

// ---------------------------------------------------------------------------
// Forward simulation (Def-6.4-style obligations) with built-in relations.

struct SimObligation {
  std::string name; // client-observation | initialisation | step
  bool holds = true;
  std::string witness;
};

struct SimulationReport {
  bool pass = true;
  std::vector<SimObligation> obligations;
  long long pairs = 0;
};

/// Built-in relation names: client-obs, seqlock, ticketlock, treiber-rts.
/// A simulation run conjoins client-obs with the library-specific relation.
SimulationReport checkSimulation(const std::string &relation,
                                 const ProgramSpec &client,
                                 const std::string &abstractKind,
                                 const std::string &concreteKind,
                                 const Bounds &b);

// ---------------------------------------------------------------------------
// Treiber-specific checks.

/// The six global invariants of the translated Treiber model; empty result
/// means all hold. Violations name the invariant number.
std::vector<Violation> treiberInvariants(const Config &cfg,
                                         const ExecProgram &prog);

/// Evaluates the R_TS conditions (7)-(13) for an explicitly given node map
/// `f` (address -> abstract unmatched push ref) over an abstract/concrete
/// state pair; diagnostic companion to checkRefinement.
std::vector<Violation> rtsConditions(const std::map<long long, OpRef> &f,
                                     const Config &abs, const Config &conc,
                                     const ExecProgram &absProg,
                                     const ExecProgram &concProg);

} // namespace rarcheck

#endif
