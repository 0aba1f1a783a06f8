#include "rarcheck/report.hpp"

namespace rarcheck {

std::string jsonEscape(const std::string &s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    case '\r': out += "\\r"; break;
    default:
      if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out += buf;
      } else {
        out += c;
      }
    }
  }
  return out;
}

void JsonWriter::sep() {
  if (pendingKey_) {
    pendingKey_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ << ",";
    first_.back() = false;
  }
}

JsonWriter &JsonWriter::beginObject() {
  sep();
  out_ << "{";
  first_.push_back(true);
  return *this;
}
JsonWriter &JsonWriter::endObject() {
  out_ << "}";
  first_.pop_back();
  return *this;
}
JsonWriter &JsonWriter::beginArray() {
  sep();
  out_ << "[";
  first_.push_back(true);
  return *this;
}
JsonWriter &JsonWriter::endArray() {
  out_ << "]";
  first_.pop_back();
  return *this;
}
JsonWriter &JsonWriter::key(const std::string &k) {
  sep();
  out_ << "\"" << jsonEscape(k) << "\":";
  pendingKey_ = true;
  return *this;
}
JsonWriter &JsonWriter::value(const std::string &v) {
  sep();
  out_ << "\"" << jsonEscape(v) << "\"";
  return *this;
}
JsonWriter &JsonWriter::value(const char *v) { return value(std::string(v)); }
JsonWriter &JsonWriter::value(long long v) {
  sep();
  out_ << v;
  return *this;
}
JsonWriter &JsonWriter::value(int v) { return value(static_cast<long long>(v)); }
JsonWriter &JsonWriter::value(bool v) {
  sep();
  out_ << (v ? "true" : "false");
  return *this;
}
JsonWriter &JsonWriter::null() {
  sep();
  out_ << "null";
  return *this;
}

} // namespace rarcheck
