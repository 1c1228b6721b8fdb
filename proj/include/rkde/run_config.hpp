#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace rkde {

/// Parsed command line in canonical form.  `params` holds every named
/// parameter that influences the output, as text.  The parallelism degree
/// and the output path are deliberately left out of the canonical text so
/// that reports are byte-identical across them.
struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string seed_source = "default";  // default | env:RKDE_SEED | flag
  std::string out;
  unsigned jobs = 0;

  bool operator==(const RunConfig&) const = default;
};

/// "command=<c> k1=v1 k2=v2 ... seed=<s>", keys sorted.
std::string canonical_text(const RunConfig& cfg);

/// Inverse of canonical_text (jobs, out and seed_source are not recovered).
RunConfig parse_canonical_text(const std::string& text);

/// Seed precedence: explicit flag, then the RKDE_SEED environment variable,
/// then `fallback`.
void resolve_seed(RunConfig& cfg, bool flag_given, std::uint64_t flag_value,
                  std::uint64_t fallback);

}  // namespace rkde
