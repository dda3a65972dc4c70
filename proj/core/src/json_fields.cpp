#include "serpent/json_fields.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace serpent {

ObjectReader::ObjectReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
  if (!obj_.is_object()) throw ParseError(path_, "expected an object");
}

std::string ObjectReader::child_path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

bool ObjectReader::has(const std::string& key) const { return obj_.contains(key); }

const Json& ObjectReader::at(const std::string& key) {
  if (!obj_.contains(key)) throw ParseError(child_path(key), "missing required field");
  seen_.insert(key);
  return obj_.at(key);
}

double ObjectReader::number(const std::string& key) {
  const Json& v = at(key);
  if (!v.is_number()) throw ParseError(child_path(key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(child_path(key), "expected a finite number");
  return d;
}

double ObjectReader::number_or(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

long long ObjectReader::integer(const std::string& key) {
  const Json& v = at(key);
  if (!v.is_number_integer()) throw ParseError(child_path(key), "expected an integer");
  return v.get<long long>();
}

long long ObjectReader::integer_or(const std::string& key, long long fallback) {
  return has(key) ? integer(key) : fallback;
}

bool ObjectReader::boolean_or(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_boolean()) throw ParseError(child_path(key), "expected true or false");
  return v.get<bool>();
}

std::string ObjectReader::string(const std::string& key) {
  const Json& v = at(key);
  if (!v.is_string()) throw ParseError(child_path(key), "expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::string_or(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

ObjectReader ObjectReader::object(const std::string& key) {
  return ObjectReader(at(key), child_path(key));
}

void ObjectReader::finish() const {
  for (const auto& item : obj_.items()) {
    if (!seen_.contains(item.key())) throw ParseError(child_path(item.key()), "unknown field");
  }
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "syntax error at line " << line << ", column " << col;
    throw ParseError("", msg.str());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace serpent
