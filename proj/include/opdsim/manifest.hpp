#pragma once

// Provenance record embedded in every report.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "opdsim/assignment.hpp"
#include "opdsim/config.hpp"
#include "opdsim/patientgen.hpp"

namespace opdsim {

std::string sha256_hex(std::string_view data);
std::string_view code_version();

struct RunManifest {
  std::string config_json;
  std::string dataset_fingerprint;
  std::string roster_fingerprint;
  std::string code_version;
  std::uint64_t base_seed = 0;
  std::size_t n_runs = 0;
  // Taken from SOURCE_DATE_EPOCH when set, otherwise empty so that reruns
  // stay byte-identical.
  std::string created;

  /// Hash of everything except `created`.
  std::string hash() const;
  /// Hash of the inputs two experiments must share to be compared: dataset,
  /// roster, code version and seed ladder.
  std::string comparability_hash() const;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

RunManifest make_manifest(const StrategyConfig& config, const Dataset& dataset, std::span<const Physician> roster,
                          std::uint64_t base_seed, std::size_t n_runs);

}  // namespace opdsim
