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


#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gpl/error.hpp"
#include "gpl/pipeline.hpp"
#include "gpl/synth.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("gpl");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("GPL_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honor "off" when asked for
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
    else spdlog::warn("GPL_LOG={} is not a log level; using info", env);
  }
}

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw gpl::Error(gpl::ErrorCode::ConfigError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_synth(const std::filesystem::path& spec_path, const std::filesystem::path& out) {
  const auto spec = gpl::parse_synth_spec(read_all(spec_path));
  const auto task = gpl::generate_task(spec);
  gpl::write_task(task, out);
  // a ready-to-run config next to the task
  gpl::PipelineConfig cfg;
  cfg.manifest = std::filesystem::absolute(out / "manifest.json");
  cfg.output = std::filesystem::absolute(out / "out");
  std::ofstream(out / "pipeline.json") << gpl::format_pipeline_config(cfg, std::filesystem::absolute(out));
  spdlog::info("wrote task '{}' with {} videos to {}", spec.task_name, task.videos.size(), out.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"gpl: procedure learning from unlabeled videos"};
  app.require_subcommand(1);

  std::filesystem::path config_path;
  bool force = false;
  unsigned threads = 0;
  bool deterministic = true;

  std::vector<std::pair<gpl::Stage, CLI::App*>> stage_cmds;
  for (const auto stage : {gpl::Stage::Filter, gpl::Stage::Graph, gpl::Stage::Embed, gpl::Stage::Cluster,
                           gpl::Stage::Order, gpl::Stage::Eval, gpl::Stage::All}) {
    auto* cmd = app.add_subcommand(std::string(gpl::to_string(stage)),
                                   stage == gpl::Stage::All ? "run every stage in order"
                                                            : "run the " + std::string(gpl::to_string(stage)) + " stage");
    cmd->add_option("--config", config_path, "pipeline config (JSON)")->required();
    cmd->add_flag("--force", force, "rerun even if artifacts are up to date");
    cmd->add_option("--threads", threads, "worker threads (overrides config)")->check(CLI::PositiveNumber);
    cmd->add_flag("--deterministic{true}", deterministic,
                  "bit-reproducible training (--deterministic=false for hogwild)");
    stage_cmds.emplace_back(stage, cmd);
  }

  std::filesystem::path spec_path, synth_out;
  auto* synth = app.add_subcommand("synth", "generate a synthetic task");
  synth->add_option("--spec", spec_path, "synthetic task spec (JSON)")->required();
  synth->add_option("--out", synth_out, "output task directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return run_synth(spec_path, synth_out);
    for (const auto& [stage, cmd] : stage_cmds) {
      if (!cmd->parsed()) continue;
      gpl::RunOptions options;
      options.force = force;
      if (threads > 0) options.threads = threads;
      if (cmd->count("--deterministic") > 0) options.deterministic = deterministic;
      gpl::Pipeline pipeline(gpl::load_pipeline_config(config_path), options);
      for (const auto& r : pipeline.run(stage)) {
        spdlog::debug("{}: {}", gpl::to_string(r.stage), r.skipped ? "skipped" : "ran");
      }
    }
    return 0;
  } catch (const gpl::Error& e) {
    spdlog::error("{}", e.what());
    return gpl::exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 3;
  }
}
