// Copyright 2026 The UnityGraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "gpl/manifest.hpp"

#include <json.hpp>

#include "binary_io.hpp"
#include "gpl/error.hpp"

namespace gpl {

using nlohmann::json;

std::optional<std::string> TaskManifest::validate() const {
  if (task_name.empty()) throw Error(ErrorCode::ConfigError, "manifest: empty task_name");
  if (K < 1) throw Error(ErrorCode::ConfigError, "manifest: K must be >= 1");
  if (entries.empty()) throw Error(ErrorCode::ConfigError, "manifest: no videos");
  if (sampler) sampler->validate();
  if (entries.size() == 1) {
    return "task '" + task_name +
           "' has a single video; the graph will contain temporal edges only";
  }
  return std::nullopt;
}

TaskManifest parse_manifest(const std::string& json_text,
                            const std::filesystem::path& base_dir) {
  TaskManifest man;
  try {
    const auto j = json::parse(json_text);
    man.task_name = j.at("task_name").get<std::string>();
    const auto k = j.at("K").get<std::int64_t>();
    if (k < 1) throw Error(ErrorCode::ConfigError, "manifest: K must be >= 1");
    man.K = static_cast<std::uint32_t>(k);
    man.egocentric = j.value("egocentric", false);
    if (j.contains("sampler")) {
      const auto& s = j.at("sampler");
      SamplerConfig cfg;
      cfg.sigma = s.at("sigma").get<std::uint32_t>();
      cfg.omega = s.at("omega").get<std::uint32_t>();
      cfg.psi = s.at("psi").get<std::uint32_t>();
      man.sampler = cfg;
    }
    const auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    for (const auto& v : j.at("videos")) {
      ManifestEntry e;
      e.features = resolve(v.at("features").get<std::string>());
      if (v.contains("annotations") && !v.at("annotations").is_null()) {
        e.annotations = resolve(v.at("annotations").get<std::string>());
      }
      if (v.contains("mask") && !v.at("mask").is_null()) {
        e.mask = resolve(v.at("mask").get<std::string>());
      }
      man.entries.push_back(std::move(e));
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ConfigError, std::string("manifest: ") + ex.what());
  }
  man.validate();
  return man;
}

TaskManifest load_manifest(const std::filesystem::path& path) {
  std::vector<char> bytes;
  try {
    bytes = detail::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigError, "cannot read manifest " + path.string());
  }
  return parse_manifest(std::string(bytes.begin(), bytes.end()), path.parent_path());
}

std::string format_manifest(const TaskManifest& manifest,
                            const std::filesystem::path& base_dir) {
  const auto rel = [&](const std::filesystem::path& p) {
    if (base_dir.empty() || p.is_relative()) return p.generic_string();
    return p.lexically_relative(base_dir).generic_string();
  };
  json j;
  j["task_name"] = manifest.task_name;
  j["K"] = manifest.K;
  j["egocentric"] = manifest.egocentric;
  if (manifest.sampler) {
    j["sampler"] = {{"sigma", manifest.sampler->sigma},
                    {"omega", manifest.sampler->omega},
                    {"psi", manifest.sampler->psi}};
  }
  j["videos"] = json::array();
  for (const auto& e : manifest.entries) {
    json v;
    v["features"] = rel(e.features);
    if (e.annotations) v["annotations"] = rel(*e.annotations);
    if (e.mask) v["mask"] = rel(*e.mask);
    j["videos"].push_back(std::move(v));
  }
  return j.dump(2) + "\n";
}

}  // namespace gpl
