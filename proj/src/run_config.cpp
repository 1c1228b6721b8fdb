#include "rkde/run_config.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace rkde {

namespace {

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw std::invalid_argument("seed must be an unsigned 64-bit integer, got '" + text + "'");
  return v;
}

void check_token(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(" =\n") != std::string::npos)
    throw std::invalid_argument(std::string(what) + " must be non-empty without spaces or '=': '" +
                                s + "'");
}

}  // namespace

std::string canonical_text(const RunConfig& cfg) {
  check_token(cfg.command, "command");
  std::string out = "command=" + cfg.command;
  for (const auto& [k, v] : cfg.params) {
    check_token(k, "parameter name");
    check_token(v, "parameter value");
    if (k == "command" || k == "seed") throw std::invalid_argument("reserved parameter name " + k);
    out += " " + k + "=" + v;
  }
  out += " seed=" + std::to_string(cfg.seed);
  return out;
}

RunConfig parse_canonical_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string tok;
  bool have_command = false, have_seed = false;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
      throw std::invalid_argument("malformed token '" + tok + "'");
    const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
    if (key == "command") {
      cfg.command = value;
      have_command = true;
    } else if (key == "seed") {
      cfg.seed = parse_seed(value);
      have_seed = true;
    } else if (!cfg.params.emplace(key, value).second) {
      throw std::invalid_argument("duplicate parameter '" + key + "'");
    }
  }
  if (!have_command || !have_seed)
    throw std::invalid_argument("canonical text needs command= and seed=");
  return cfg;
}

void resolve_seed(RunConfig& cfg, bool flag_given, std::uint64_t flag_value,
                  std::uint64_t fallback) {
  if (flag_given) {
    cfg.seed = flag_value;
    cfg.seed_source = "flag";
    return;
  }
  if (const char* env = std::getenv("RKDE_SEED"); env && *env) {
    cfg.seed = parse_seed(env);
    cfg.seed_source = "env:RKDE_SEED";
    return;
  }
  cfg.seed = fallback;
  cfg.seed_source = "default";
}

}  // namespace rkde
