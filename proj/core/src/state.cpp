#include "rarcheck/state.hpp"

#include "rarcheck/lang.hpp"

#include <algorithm>
#include <sstream>

namespace rarcheck {

std::vector<TimestampedOp> observable(const CompState &s, Tid t,
                                      const Location &x) {
  auto tl = s.timelines.find(x);
  if (tl == s.timelines.end())
    throw UsageError("observable: unknown location " + x.name);
  auto tv = s.tview.find(t);
  if (tv == s.tview.end())
    throw UsageError("observable: unknown thread " + std::to_string(t));
  auto vf = tv->second.find(x);
  if (vf == tv->second.end())
    throw UsageError("observable: thread t" + std::to_string(t) +
                     " has no viewfront for " + x.name);
  std::vector<TimestampedOp> out;
  for (auto it = tl->second.lower_bound(vf->second); it != tl->second.end();
       ++it)
    out.push_back(TimestampedOp{it->second, it->first});
  return out;
}

View mergeViews(const View &v1, const View &v2) {
  View out = v1;
  for (auto &[x, ts] : out) {
    auto it = v2.find(x);
    if (it != v2.end() && !(it->second <= ts)) ts = it->second;
  }
  return out;
}

TimestampedOp lastOp(const CompState &s, const Location &x) {
  auto tl = s.timelines.find(x);
  if (tl == s.timelines.end() || tl->second.empty())
    throw UsageError("lastOp: no operations on " + x.name);
  auto it = tl->second.rbegin();
  return TimestampedOp{it->second, it->first};
}

std::vector<Violation> wellformed(const CompState &s) {
  std::vector<Violation> out;
  // cvd subset of ops
  for (const auto &ref : s.cvd) {
    if (!s.opAt(ref.loc, ref.ts))
      out.push_back({"cvd subset",
                     "covered op " + ref.loc.name + "@" + ref.ts.str() +
                         " not in ops"});
  }
  // every op's action is on its timeline's location
  for (const auto &[x, tl] : s.timelines)
    for (const auto &[ts, a] : tl)
      if (a.loc != x)
        out.push_back({"timeline location",
                       a.str() + " stored on timeline of " + x.name});
  // tview points into ops, on this component's locations
  for (const auto &[t, view] : s.tview) {
    for (const auto &[x, ts] : view) {
      if (!s.hasLocation(x))
        out.push_back({"tview component",
                       "t" + std::to_string(t) + " views foreign location " +
                           x.name});
      else if (!s.opAt(x, ts))
        out.push_back({"tview dangling",
                       "t" + std::to_string(t) + " views missing op " +
                           x.name + "@" + ts.str()});
    }
  }
  // matched pairs reference same-object ops, injectively
  for (const auto &[o, pairs] : s.matched) {
    std::set<Rat> doms, rans;
    for (const auto &[a, b] : pairs) {
      if (!s.opAt(o, a) || !s.opAt(o, b))
        out.push_back({"matched dangling",
                       o.name + ": (" + a.str() + "," + b.str() + ")"});
      if (!doms.insert(a).second)
        out.push_back({"matched injective", o.name + ": dom " + a.str()});
      if (!rans.insert(b).second)
        out.push_back({"matched injective", o.name + ": ran " + b.str()});
    }
  }
  return out;
}

std::vector<Violation> wellformed(const Config &cfg) {
  std::vector<Violation> out = wellformed(cfg.client);
  auto lib = wellformed(cfg.lib);
  out.insert(out.end(), lib.begin(), lib.end());
  // mview values must reference existing ops somewhere in the system
  auto checkMviews = [&](const CompState &s, const char *which) {
    for (const auto &[ref, view] : s.mview) {
      if (!s.opAt(ref.loc, ref.ts))
        out.push_back({"mview key", std::string(which) + ": " + ref.loc.name +
                                        "@" + ref.ts.str()});
      for (const auto &[x, ts] : view) {
        if (!cfg.client.opAt(x, ts) && !cfg.lib.opAt(x, ts))
          out.push_back({"mview dangling",
                         std::string(which) + ": " + ref.loc.name + " -> " +
                             x.name + "@" + ts.str()});
      }
    }
  };
  checkMviews(cfg.client, "client");
  checkMviews(cfg.lib, "library");
  // thread-id sets coincide
  for (const auto &[t, st] : cfg.threads)
    if (!cfg.locals.count(t))
      out.push_back({"thread ids", "t" + std::to_string(t) + " has no locals"});
  return out;
}

namespace {

using RankMap = std::map<Location, std::map<Rat, Rat>>;

RankMap rankMaps(const Config &cfg) {
  RankMap rm;
  auto add = [&](const CompState &s) {
    for (const auto &[x, tl] : s.timelines) {
      auto &m = rm[x];
      long long r = 0;
      for (const auto &[ts, a] : tl) m[ts] = Rat(r++);
    }
  };
  add(cfg.client);
  add(cfg.lib);
  return rm;
}

View remapView(const View &v, const RankMap &rm) {
  View out;
  for (const auto &[x, ts] : v) {
    auto it = rm.find(x);
    if (it == rm.end()) {
      out[x] = ts; // dangling entry; wellformed reports it
      continue;
    }
    auto jt = it->second.find(ts);
    out[x] = jt == it->second.end() ? ts : jt->second;
  }
  return out;
}

CompState remapComp(const CompState &s, const RankMap &rm) {
  CompState out;
  for (const auto &[x, tl] : s.timelines) {
    auto &m = out.timelines[x];
    const auto &r = rm.at(x);
    for (const auto &[ts, a] : tl) m[r.at(ts)] = a;
  }
  for (const auto &[t, v] : s.tview) out.tview[t] = remapView(v, rm);
  for (const auto &[ref, v] : s.mview) {
    Rat ts = ref.ts;
    auto it = rm.find(ref.loc);
    if (it != rm.end()) {
      auto jt = it->second.find(ref.ts);
      if (jt != it->second.end()) ts = jt->second;
    }
    out.mview[OpRef{ref.loc, ts}] = remapView(v, rm);
  }
  for (const auto &ref : s.cvd) {
    Rat ts = ref.ts;
    auto it = rm.find(ref.loc);
    if (it != rm.end()) {
      auto jt = it->second.find(ref.ts);
      if (jt != it->second.end()) ts = jt->second;
    }
    out.cvd.insert(OpRef{ref.loc, ts});
  }
  for (const auto &[o, pairs] : s.matched) {
    auto it = rm.find(o);
    auto &dst = out.matched[o];
    for (const auto &[a, b] : pairs) {
      Rat ra = a, rb = b;
      if (it != rm.end()) {
        auto ja = it->second.find(a);
        if (ja != it->second.end()) ra = ja->second;
        auto jb = it->second.find(b);
        if (jb != it->second.end()) rb = jb->second;
      }
      dst.insert({ra, rb});
    }
  }
  return out;
}

} // namespace

Config canonicalize(const Config &cfg) {
  RankMap rm = rankMaps(cfg);
  Config out = cfg;
  out.client = remapComp(cfg.client, rm);
  out.lib = remapComp(cfg.lib, rm);
  return out;
}

namespace {

void writeView(std::ostringstream &os, const View &v) {
  os << "{";
  for (const auto &[x, ts] : v) os << x.name << ":" << ts.str() << ";";
  os << "}";
}

void writeComp(std::ostringstream &os, const CompState &s) {
  os << "ops[";
  for (const auto &[x, tl] : s.timelines) {
    os << x.name << "=";
    for (const auto &[ts, a] : tl) os << ts.str() << ":" << a.str() << ",";
    os << "|";
  }
  os << "]tv[";
  for (const auto &[t, v] : s.tview) {
    os << t << "=";
    writeView(os, v);
  }
  os << "]mv[";
  for (const auto &[ref, v] : s.mview) {
    os << ref.loc.name << "@" << ref.ts.str() << "=";
    writeView(os, v);
  }
  os << "]cvd[";
  for (const auto &ref : s.cvd) os << ref.loc.name << "@" << ref.ts.str() << ";";
  os << "]m[";
  for (const auto &[o, pairs] : s.matched) {
    os << o.name << "=";
    for (const auto &[a, b] : pairs) os << a.str() << "~" << b.str() << ";";
  }
  os << "]";
}

} // namespace

std::string compStateKey(const CompState &s) {
  std::ostringstream os;
  writeComp(os, s);
  return os.str();
}

std::string configKey(const Config &cfg) {
  std::ostringstream os;
  os << "P[";
  for (const auto &[t, st] : cfg.threads) {
    os << t << "@" << st.line << ":";
    os << (st.cur ? printCmd(st.cur) : "-");
    os << "#";
    for (const auto &[site, n] : st.loopCount) os << site << "=" << n << ",";
    os << ";";
  }
  os << "]L[";
  for (const auto &[t, env] : cfg.locals) {
    os << t << "{";
    for (const auto &[r, v] : env) os << r << "=" << v.str() << ",";
    os << "}";
  }
  os << "]C:";
  writeComp(os, cfg.client);
  os << "B:";
  writeComp(os, cfg.lib);
  os << "U[";
  for (long long a : cfg.usedAddr) os << a << ",";
  os << "]Pu[";
  for (long long a : cfg.pushedAddr) os << a << ",";
  os << "]";
  return os.str();
}

} // namespace rarcheck
