#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sagr/errors.hpp"

namespace sagr::detail {

using nlohmann::json;

// Line of byte offset `pos` in `text`, 1-based.
inline int line_of(std::string_view text, std::size_t pos) {
  int line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what(), line_of(text, e.byte), "");
  }
}

// Typed access to an object node, reporting failures by JSON pointer.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& msg, const std::string& key = "") const {
    std::string where = key.empty() ? path_ : path_ + "/" + key;
    throw ParseError(where + ": " + msg, 0, where);
  }

  void require_object() const {
    if (!j_.is_object()) fail("expected an object");
  }
  void require_array() const {
    if (!j_.is_array()) fail("expected an array");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  Node at(const std::string& key) const {
    require_object();
    if (!j_.contains(key)) fail("missing field", key);
    return Node(j_.at(key), path_ + "/" + key);
  }

  std::vector<Node> items() const {
    require_array();
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], path_ + "/" + std::to_string(i));
    return out;
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  long long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long long>();
  }
  int int32() const {
    long long v = integer();
    if (v < -2000000000LL || v > 2000000000LL) fail("integer out of range");
    return static_cast<int>(v);
  }
  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected a boolean");
    return j_.get<bool>();
  }

  std::string str(const std::string& key) const { return at(key).str(); }
  int int32(const std::string& key) const { return at(key).int32(); }
  double number(const std::string& key) const { return at(key).number(); }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    require_object();
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool ok = false;
      for (auto k : keys) ok = ok || it.key() == k;
      if (!ok) fail("unknown field", it.key());
    }
  }

 private:
  const json& j_;
  std::string path_;
};

}  // namespace sagr::detail
