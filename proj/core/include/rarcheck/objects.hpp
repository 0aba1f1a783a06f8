#ifndef RARCHECK_OBJECTS_HPP
#define RARCHECK_OBJECTS_HPP

#include "rarcheck/state.hpp"

#include <vector>

namespace rarcheck {

/// One resolved outcome of an abstract-object transition.
struct ObjSuccessor {
  CompState lib;
  CompState cli;
  Action action; // fully valued, with lock index filled in
};

/// Lock semantics: acquire reads the maximal op (init or the latest release),
/// covers it and appends the acquire; release appends when the caller holds
/// the lock. `relaxedAcquire` suppresses the view merges (mutant semantics).
std::vector<ObjSuccessor> lockStep(const CompState &lib, const CompState &cli,
                                   Tid t, const Action &proto,
                                   bool relaxedAcquire = false);

/// Queue semantics: enqueues choose any rule-legal insertion slot; non-empty
/// dequeues match the first unmatched enqueue; empty dequeues require all
/// earlier ops matched or empty markers.
std::vector<ObjSuccessor> queueStep(const CompState &lib, const CompState &cli,
                                    Tid t, const Action &proto);

/// Stack semantics: pushes and pops avoid matched intervals; non-empty pops
/// match an unmatched push with every unmatched push between it and the pop
/// already matched.
std::vector<ObjSuccessor> stackStep(const CompState &lib, const CompState &cli,
                                    Tid t, const Action &proto);

/// FIFO oracle over a final library state: matched dequeues ordered by
/// dequeue timestamp carry the same value sequence as their enqueues ordered
/// by enqueue timestamp.
bool fifoHolds(const CompState &lib, const Location &q);

/// LIFO oracle: matched (push, pop) timestamp intervals are well nested.
bool lifoHolds(const CompState &lib, const Location &s);

} // namespace rarcheck

#endif
