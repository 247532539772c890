#include "lowmult/store.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <json.hpp>

namespace lowmult {

std::string config_fingerprint_hex(const std::string& canonical_config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void store_append(const std::string& path, const ResultRecord& rec) {
  nlohmann::ordered_json j;
  j["fingerprint"] = rec.fingerprint;
  j["timestamp"] = rec.timestamp;
  j["version"] = rec.version;
  j["config"] = nlohmann::ordered_json::parse(rec.config_json);
  j["output"] = nlohmann::ordered_json::parse(rec.output_json);
  const std::string line = j.dump() + "\n";

  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw std::runtime_error("store: cannot open " + path);
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw std::runtime_error("store: cannot lock " + path);
  }
  const ssize_t w = ::write(fd, line.data(), line.size());
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (w != static_cast<ssize_t>(line.size()))
    throw std::runtime_error("store: short write to " + path);
}

std::vector<ResultRecord> store_query(const std::string& path, const std::string& fingerprint,
                                      std::string* warnings) {
  std::vector<ResultRecord> out;
  std::ifstream in(path);
  if (!in) return out;  // absent store: no records
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
      ResultRecord rec;
      rec.fingerprint = j.at("fingerprint").get<std::string>();
      rec.timestamp = j.at("timestamp").get<std::string>();
      rec.version = j.at("version").get<std::string>();
      rec.config_json = j.at("config").dump();
      rec.output_json = j.at("output").dump();
      if (fingerprint.empty() || rec.fingerprint == fingerprint) out.push_back(std::move(rec));
    } catch (const std::exception& e) {
      if (warnings)
        *warnings += "store: skipping corrupt line " + std::to_string(lineno) + ": " + e.what() + "\n";
    }
  }
  return out;
}

}  // namespace lowmult
