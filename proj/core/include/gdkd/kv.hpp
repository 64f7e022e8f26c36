#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gdkd {

/// Plain-text key=value file ('#' starts a comment line). Keys are written
/// in sorted order so identical contents serialize identically.
class KvFile {
 public:
  KvFile() = default;
  static KvFile load(const std::string& path);
  void save(const std::string& path) const;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or_throw(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set(const std::string& key, double value);
  void set(const std::string& key, std::int64_t value);
  void set(const std::string& key, std::uint64_t value);

  const std::map<std::string, std::string>& items() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// FNV-1a 64-bit hash of a file's bytes as a hex string; used to stamp
/// artifacts into run manifests.
std::string file_content_hash(const std::string& path);

/// %.17g rendering, enough digits to round-trip a double exactly.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace gdkd
