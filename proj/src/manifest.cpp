#include "opdsim/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdlib>
#include <fmt/format.h>

#include "json.hpp"

#ifndef OPDSIM_VERSION
#define OPDSIM_VERSION "0.0.0"
#endif

namespace opdsim {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string_view code_version() { return OPDSIM_VERSION; }

namespace {

nlohmann::json body(const RunManifest& m) {
  return {{"config", nlohmann::json::parse(m.config_json)},
          {"dataset_fingerprint", m.dataset_fingerprint},
          {"roster_fingerprint", m.roster_fingerprint},
          {"code_version", m.code_version},
          {"base_seed", m.base_seed},
          {"n_runs", m.n_runs}};
}

}  // namespace

std::string RunManifest::hash() const { return sha256_hex(body(*this).dump()); }

std::string RunManifest::comparability_hash() const {
  return sha256_hex(fmt::format("{}|{}|{}|{}|{}", dataset_fingerprint, roster_fingerprint, code_version, base_seed,
                                n_runs));
}

std::string RunManifest::to_json() const {
  auto j = body(*this);
  j["created"] = created;
  j["manifest_hash"] = hash();
  j["comparability_hash"] = comparability_hash();
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  RunManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.config_json = j.at("config").dump();
    j.at("dataset_fingerprint").get_to(m.dataset_fingerprint);
    j.at("roster_fingerprint").get_to(m.roster_fingerprint);
    j.at("code_version").get_to(m.code_version);
    j.at("base_seed").get_to(m.base_seed);
    j.at("n_runs").get_to(m.n_runs);
    if (j.contains("created")) j.at("created").get_to(m.created);
    if (j.contains("manifest_hash") && j.at("manifest_hash").get<std::string>() != m.hash())
      throw ValidationError("manifest hash does not match its contents");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

RunManifest make_manifest(const StrategyConfig& config, const Dataset& dataset, std::span<const Physician> roster,
                          std::uint64_t base_seed, std::size_t n_runs) {
  RunManifest m;
  m.config_json = nlohmann::json::parse(config_to_json(config)).dump();
  m.dataset_fingerprint = sha256_hex(dataset_to_json(dataset));
  m.roster_fingerprint = sha256_hex(roster_to_json(roster));
  m.code_version = std::string(code_version());
  m.base_seed = base_seed;
  m.n_runs = n_runs;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) m.created = epoch;
  return m;
}

}  // namespace opdsim
