// SPDX-License-Identifier: Apache-2.0
#include "stcris/manifest.hpp"

#include "stcris/io.hpp"
#include "stcris/types.hpp"

namespace stcris {

nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["version"] = m.version;
  j["config"] = m.config;
  j["outputs"] = m.outputs;
  return j;
}

RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.config = j.at("config");
    for (const auto& o : j.at("outputs")) {
      m.outputs.push_back(o.get<std::string>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad manifest JSON: ") + e.what());
  }
}

void write_manifest(const std::string& path, const RunManifest& m) {
  io::write_text_file(path, manifest_to_json(m).dump(2) + "\n");
}

RunManifest read_manifest(const std::string& path) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(io::read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse manifest: ") + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace stcris
