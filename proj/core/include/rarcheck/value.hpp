#ifndef RARCHECK_VALUE_HPP
#define RARCHECK_VALUE_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace rarcheck {

/// Run-time values: bounded integers plus the distinguished tokens used by
/// the object semantics. `undef` is the unset/null-return token; `empty` is
/// the non-value returned by a dequeue/pop on an empty object.
struct Value {
  enum class Kind { Undef, Bool, Int, Empty };
  Kind kind = Kind::Undef;
  long long i = 0; // Int payload; Bool stores 0/1 here too

  Value() = default;

  static Value undef() { return Value{}; }
  static Value boolean(bool b) { return Value{Kind::Bool, b ? 1 : 0}; }
  static Value integer(long long v) { return Value{Kind::Int, v}; }
  static Value empty() { return Value{Kind::Empty, 0}; }

  bool isUndef() const { return kind == Kind::Undef; }
  bool isInt() const { return kind == Kind::Int; }
  bool isBool() const { return kind == Kind::Bool; }
  bool isEmpty() const { return kind == Kind::Empty; }

  bool truthy() const {
    return (kind == Kind::Bool || kind == Kind::Int) && i != 0;
  }

  friend bool operator==(const Value &, const Value &) = default;
  friend std::strong_ordering operator<=>(const Value &a, const Value &b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.i <=> b.i;
  }

  std::string str() const {
    switch (kind) {
    case Kind::Undef: return "undef";
    case Kind::Bool: return i ? "true" : "false";
    case Kind::Int: return std::to_string(i);
    case Kind::Empty: return "empty";
    }
    return "?";
  }

private:
  Value(Kind k, long long v) : kind(k), i(v) {}
};

} // namespace rarcheck

#endif
