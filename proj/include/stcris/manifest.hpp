// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace stcris {

// Written alongside every output set. Holds the fully resolved
// configuration (defaults materialized, seed included), so running the
// same command from the manifest regenerates the outputs byte for byte.
// Deliberately free of timestamps and absolute paths.
struct RunManifest {
  std::string command;
  std::string version;
  nlohmann::ordered_json config;
  std::vector<std::string> outputs;  // basenames, relative to the manifest
};

nlohmann::ordered_json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

}  // namespace stcris
