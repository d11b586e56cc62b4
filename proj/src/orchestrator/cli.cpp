#include "radfabric/orchestrator/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "radfabric/agents/backends.hpp"
#include "radfabric/anatomy/correlate.hpp"
#include "radfabric/mcp/server.hpp"
#include "radfabric/orchestrator/evaluate.hpp"
#include "radfabric/orchestrator/fixtures_check.hpp"
#include "radfabric/orchestrator/pipeline.hpp"
#include "radfabric/raster/grid_io.hpp"
#include "radfabric/reward/batch.hpp"

namespace radfabric::cli {

namespace fs = std::filesystem;
using orchestrator::PipelineConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitRemote = 2;

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

PipelineConfig load(const std::string& path) {
  return path.empty() ? orchestrator::default_config() : orchestrator::load_config(path);
}

int cmd_serve(const PipelineConfig& config, const std::string& address, bool use_stdio,
              std::ostream& err) {
  agents::FixtureStore store(config.fixtures_root);
  agents::AgentContext ctx;
  ctx.fixtures = &store;
  ctx.remote_timeout = config.remote_timeout;
  auto tools = agents::agent_tools(config.agents, ctx);
  mcp::TransportConfig transport =
      use_stdio ? mcp::TransportConfig::stdio() : mcp::TransportConfig::parse_address(address);
  auto handle = mcp::serve(std::move(tools), transport);
  if (!use_stdio) {
    err << "serving " << config.agents.size() << " agent tools on " << transport.host << ":"
        << handle->port() << "\n";
    err.flush();
  }
  handle->wait();
  return kExitOk;
}

int cmd_run(PipelineConfig config, const std::string& target, std::ostream& out) {
  const fs::path path(target);
  std::vector<orchestrator::StudyRecord> records;
  if (fs::is_directory(path) && orchestrator::has_manifest(path)) {
    config.fixtures_root = path;
    records = orchestrator::run_dataset(config, orchestrator::load_manifest(path));
  } else if (fs::is_directory(path)) {
    config.fixtures_root = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    const std::string id = path.filename().string();
    records.push_back(orchestrator::run_study(config, orchestrator::default_inputs(config, id)));
  } else {
    records.push_back(orchestrator::run_study(config, orchestrator::default_inputs(config, target)));
  }
  bool any_failed = false;
  bool remote_failed = false;
  for (const auto& r : records) {
    out << r.study_id << ": " << (r.failed ? "FAILED" : "ok");
    const auto* d = r.diagnosis();
    out << " decision=" << (r.decision == orchestrator::DecisionSource::kTranscript ? "remote"
                            : d ? "fallback" : "none");
    for (const auto& f : r.flags) out << " [" << f << "]";
    out << " -> " << (config.out_dir / (r.study_id + ".json")).generic_string() << "\n";
    for (const auto& e : r.errors) {
      out << "  " << e.stage << " (" << e.kind << "): " << e.message << "\n";
      if (e.kind == "connection" || e.kind == "timeout" || e.kind == "remote-failure" ||
          e.kind == "protocol-violation") {
        remote_failed = remote_failed || r.failed;
      }
    }
    any_failed = any_failed || r.failed;
  }
  if (!any_failed) return kExitOk;
  return remote_failed ? kExitRemote : kExitInput;
}

int cmd_eval(const std::string& records_dir, const std::string& gt_path, double threshold,
             std::ostream& out) {
  if (!fs::is_directory(records_dir)) {
    fail(ErrorKind::kNotFound, "'" + records_dir + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(records_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<orchestrator::StudyRecord> records;
  for (const auto& f : files) records.push_back(orchestrator::load_record(f));
  const auto table = orchestrator::evaluate(records, reward::load_ground_truth_csv(gt_path), threshold);
  out << orchestrator::render_table(table);
  return kExitOk;
}

int cmd_reward(const PipelineConfig& config, const std::string& transcripts, const std::string& gt_path,
               const std::string& out_path, std::ostream& out) {
  const std::string result = reward::score_batch(raster::read_text_file(transcripts),
                                                 reward::load_ground_truth_csv(gt_path), config.reward);
  if (out_path.empty()) out << result;
  else raster::write_text_file(out_path, result);
  return kExitOk;
}

int cmd_correlate(const std::string& heatmap, const std::string& mask, double tau, std::ostream& out) {
  const auto h = raster::read_heatmap(heatmap);
  const auto m = anatomy::ensure_partitioned(raster::read_mask(mask));
  const auto c = anatomy::correlate(h, m, tau);
  out << "tau " << fixed3(c.tau) << "  active cells " << c.active_cells << "  active mass "
      << raster::format_real(c.active_mass) << "\n";
  out << "region            fraction  iou\n";
  for (std::size_t i = 0; i < raster::kRegionCount; ++i) {
    const auto r = static_cast<raster::Region>(i);
    std::string name(raster::region_name(r));
    name.resize(std::max<std::size_t>(name.size(), 17), ' ');
    out << name << " " << fixed3(c.fractions[i]) << "     " << fixed3(c.iou[i]) << "\n";
  }
  if (c.has_activation()) {
    out << "dominant " << raster::region_name(c.dominant) << "  centroid (" << fixed3(c.centroid->x)
        << ", " << fixed3(c.centroid->y) << ")\n";
  } else {
    out << "no activation at this tau: no focal localization\n";
  }
  return kExitOk;
}

int cmd_fixtures_validate(const PipelineConfig& config, const std::string& dir, std::ostream& out) {
  const auto rep = orchestrator::validate_fixtures(dir, config);
  for (const auto& issue : rep.issues) out << issue.file.generic_string() << ": " << issue.message << "\n";
  out << rep.studies << " studies, " << rep.files_checked << " files checked, " << rep.issues.size()
      << " issues\n";
  return rep.ok() ? kExitOk : kExitInput;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent chest radiograph diagnosis pipeline", "radfabric"};
  app.require_subcommand(1);
  // Lets --config follow the subcommand as well as precede it.
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "Pipeline configuration (JSON)")->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "Expose the configured agents as MCP tools");
  std::string address = "127.0.0.1:0";
  bool use_stdio = false;
  serve->add_option("--tcp", address, "host:port to listen on");
  serve->add_flag("--stdio", use_stdio, "Serve one session over stdin/stdout");

  auto* run_cmd = app.add_subcommand("run", "Run the pipeline on a study id, study dir or dataset dir");
  std::string target;
  std::string out_dir;
  bool serial = false;
  double run_tau = -1.0;
  run_cmd->add_option("target", target)->required();
  run_cmd->add_option("--out", out_dir, "Record directory");
  run_cmd->add_flag("--serial", serial, "Run agents one at a time");
  run_cmd->add_option("--tau", run_tau, "Activation threshold")->check(CLI::Range(0.0, 1.0));

  auto* eval = app.add_subcommand("eval", "Score persisted records against ground truth");
  std::string records_dir, gt_path;
  double threshold = -1.0;
  eval->add_option("records", records_dir)->required();
  eval->add_option("gt", gt_path)->required()->check(CLI::ExistingFile);
  eval->add_option("--threshold", threshold, "Binarization threshold");

  auto* reward_cmd = app.add_subcommand("reward-score", "Score transcripts (JSONL) against ground truth");
  std::string transcripts, reward_gt, reward_out;
  reward_cmd->add_option("transcripts", transcripts)->required()->check(CLI::ExistingFile);
  reward_cmd->add_option("gt", reward_gt)->required()->check(CLI::ExistingFile);
  reward_cmd->add_option("--out", reward_out, "Write JSONL here instead of stdout");

  auto* corr = app.add_subcommand("correlate", "Localize a heatmap against a segmentation mask");
  std::string heatmap, mask;
  double tau = -1.0;
  corr->add_option("heatmap", heatmap)->required()->check(CLI::ExistingFile);
  corr->add_option("mask", mask)->required()->check(CLI::ExistingFile);
  corr->add_option("--tau", tau, "Activation threshold")->check(CLI::Range(0.0, 1.0));

  auto* fixtures = app.add_subcommand("fixtures", "Fixture utilities");
  fixtures->require_subcommand(1);
  auto* validate = fixtures->add_subcommand("validate", "Check a fixture tree");
  std::string fixtures_dir;
  validate->add_option("dir", fixtures_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  try {
    PipelineConfig config = load(config_path);
    if (serve->parsed()) return cmd_serve(config, address, use_stdio, err);
    if (run_cmd->parsed()) {
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (run_tau >= 0.0) config.tau = run_tau;
      config.serial = serial;
      return cmd_run(std::move(config), target, out);
    }
    if (eval->parsed()) {
      return cmd_eval(records_dir, gt_path, threshold >= 0.0 ? threshold : config.reward.threshold, out);
    }
    if (reward_cmd->parsed()) return cmd_reward(config, transcripts, reward_gt, reward_out, out);
    if (corr->parsed()) return cmd_correlate(heatmap, mask, tau >= 0.0 ? tau : config.tau, out);
    if (validate->parsed()) return cmd_fixtures_validate(config, fixtures_dir, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return is_remote(e.kind()) ? kExitRemote : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  err << app.help();
  return kExitInput;
}

}  // namespace radfabric::cli
