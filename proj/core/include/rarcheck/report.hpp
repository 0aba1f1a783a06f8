#ifndef RARCHECK_REPORT_HPP
#define RARCHECK_REPORT_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace rarcheck {

/// Minimal deterministic JSON writer. Output order is exactly insertion
/// order, so reports are byte-stable for fixed inputs.
class JsonWriter {
public:
  JsonWriter &beginObject();
  JsonWriter &endObject();
  JsonWriter &beginArray();
  JsonWriter &endArray();
  JsonWriter &key(const std::string &k);
  JsonWriter &value(const std::string &v);
  JsonWriter &value(const char *v);
  JsonWriter &value(long long v);
  JsonWriter &value(int v);
  JsonWriter &value(bool v);
  JsonWriter &null();

  std::string str() const { return out_.str(); }

private:
  void sep();
  std::ostringstream out_;
  std::vector<bool> first_; // per nesting level
  bool pendingKey_ = false;
};

std::string jsonEscape(const std::string &s);

} // namespace rarcheck

#endif
