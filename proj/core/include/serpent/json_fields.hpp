#pragma once

// Strict field access for the structured-text documents (environment, roadmap,
// run configuration, plan result). Every object is read through an ObjectReader
// so unknown keys can be rejected once all known ones have been consumed.

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "serpent/errors.hpp"

namespace serpent {

using Json = nlohmann::ordered_json;

class ObjectReader {
 public:
  ObjectReader(const Json& obj, std::string path);

  bool has(const std::string& key) const;
  const Json& at(const std::string& key);

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  long long integer(const std::string& key);
  long long integer_or(const std::string& key, long long fallback);
  bool boolean_or(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string_or(const std::string& key, const std::string& fallback);

  ObjectReader object(const std::string& key);
  const std::string& path() const { return path_; }
  std::string child_path(const std::string& key) const;

  /// Throws ParseError naming the first key that was never read.
  void finish() const;

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Parses JSON text, converting syntax errors into ParseError with line/column.
Json parse_json(const std::string& text);

std::string read_text_file(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_text_file_atomic(const std::string& path, const std::string& contents);

}  // namespace serpent
