#ifndef LOWMULT_STORE_HPP
#define LOWMULT_STORE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace lowmult {

// Append-only newline-delimited JSON result store with an advisory file lock
// around appends.  Corrupt lines are skipped with a warning, never fatal.

struct ResultRecord {
  std::string fingerprint;  // hex config fingerprint
  std::string timestamp;    // ISO-8601 UTC
  std::string version;
  std::string config_json;  // canonical config
  std::string output_json;  // module output, deterministic given (config, seed)
};

void store_append(const std::string& path, const ResultRecord& rec);
std::vector<ResultRecord> store_query(const std::string& path, const std::string& fingerprint,
                                      std::string* warnings = nullptr);

std::string config_fingerprint_hex(const std::string& canonical_config);

}  // namespace lowmult

#endif
