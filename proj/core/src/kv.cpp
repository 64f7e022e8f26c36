#include "gdkd/kv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gdkd {

KvFile KvFile::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open manifest " + path);
  KvFile kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv.values_[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

void KvFile::save(const std::string& path) const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << "=" << v << "\n";
  write_text_file(path, os.str());
}

std::optional<std::string> KvFile::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KvFile::get_or_throw(const std::string& key) const {
  auto v = get(key);
  if (!v) throw std::runtime_error("manifest missing required key '" + key + "'");
  return *v;
}

void KvFile::set(const std::string& key, double value) { values_[key] = format_double(value); }
void KvFile::set(const std::string& key, std::int64_t value) { values_[key] = std::to_string(value); }
void KvFile::set(const std::string& key, std::uint64_t value) { values_[key] = std::to_string(value); }

std::string file_content_hash(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot hash missing file " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    const std::streamsize n = is.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!is) break;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << contents;
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace gdkd
