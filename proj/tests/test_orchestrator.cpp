#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "radfabric/agents/backends.hpp"
#include "radfabric/orchestrator/cli.hpp"
#include "radfabric/orchestrator/evaluate.hpp"
#include "radfabric/orchestrator/fixtures_check.hpp"
#include "radfabric/orchestrator/pipeline.hpp"
#include "radfabric/raster/grid_io.hpp"

using namespace radfabric;
using namespace radfabric::orchestrator;
using agents::Pathology;
using reward::GroundTruth;
using reward::Label;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = RADFABRIC_FIXTURE_DIR;

// A scratch directory removed at scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("radfabric_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

PipelineConfig case_config(const fs::path& out) {
  auto c = load_config(kFixtures / "case_studies" / "config.json");
  c.out_dir = out;
  return c;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "radfabric");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = radfabric::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

// A record whose fallback decision is `probs` for the listed labels, 0 elsewhere.
StudyRecord decided(const std::string& id, std::map<Pathology, double> probs) {
  StudyRecord r;
  r.study_id = id;
  reasoning::DiagnosisVector d;
  for (Pathology p : agents::kEvalLabels) d.probabilities[p] = probs.count(p) ? probs[p] : 0.0;
  r.fallback = d;
  r.decision = DecisionSource::kFallback;
  return r;
}

GroundTruth truth(const std::string& id, std::map<Pathology, Label> labels) {
  GroundTruth g;
  g.study_id = id;
  g.labels = std::move(labels);
  return g;
}

std::string strip_times(const std::string& text) {
  auto j = json::parse(text);
  j["provenance"].erase("started_at");
  j["provenance"].erase("finished_at");
  return j.dump();
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = load_config(kFixtures / "case_studies" / "config.json");
  CHECK(c.hash == sha256_hex(raster::read_text_file(kFixtures / "case_studies" / "config.json")));
  CHECK(c.fixtures_root == kFixtures / "case_studies" / ".");
  CHECK(agents::find_agent(c.agents, 102) == nullptr);
  REQUIRE(agents::find_agent(c.agents, 103) != nullptr);
  CHECK(agents::find_agent(c.agents, 7)->covers(Pathology::kPneumonia));
  CHECK(c.report_agents().size() == 2);
  CHECK(c.cxr_agents().size() == 7);

  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  auto d = default_config();
  CHECK(d.tau == 0.4);
  CHECK(d.delta == 0.3);
  CHECK_FALSE(d.reasoner.has_value());
  CHECK(d.agents.size() == 9);

  CHECK(parse_config(R"({"registry": "none", "agents": [{"id": 1, "name": "solo", "coverage": ["Edema"]}]})", ".")
            .agents.size() == 1);
  CHECK_THROWS_AS(parse_config("{\"tau\": 2}", "."), Error);
  CHECK_THROWS_AS(parse_config("{\"registry\": \"weird\"}", "."), Error);
  CHECK_THROWS_AS(parse_config("not json", "."), Error);
}

TEST_CASE("a case study run surfaces the fixture scores") {
  TempDir tmp("case");
  auto config = case_config(tmp.path);
  auto rec = run_study(config, default_inputs(config, "case_pneumonia"));
  CHECK_FALSE(rec.failed);
  REQUIRE(rec.finding_sets.size() == 7);
  agents::FixtureStore store(config.fixtures_root);
  for (const auto& f : rec.finding_sets) {
    CHECK(agents::serialize(f) == raster::read_text_file(store.study_dir("case_pneumonia") / ("agent" + std::to_string(f.agent_id) + ".json")));
  }
  CHECK(rec.prompt.find("0.861") != std::string::npos);
  CHECK(rec.prompt.find("0.9656") != std::string::npos);
  CHECK(rec.decision == DecisionSource::kFallback);
  CHECK(rec.has_flag("no-anatomy"));
  REQUIRE(rec.diagnosis());
  CHECK(rec.diagnosis()->at(Pathology::kLungOpacity) == doctest::Approx(0.9178));
  CHECK(rec.config_hash == config.hash);
  CHECK(rec.agent_backends.at(1) == "fixture");

  // Persisted and reloaded, the record is the same.
  const auto file = tmp.path / "case_pneumonia.json";
  REQUIRE(fs::exists(file));
  CHECK(serialize(load_record(file)) == raster::read_text_file(file));

  auto with_mask = run_study(config, default_inputs(config, "case_atelectasis"), false);
  REQUIRE(with_mask.anatomy.size() == 1);
  CHECK(with_mask.anatomy[0].pathology == Pathology::kAtelectasis);
  CHECK(with_mask.anatomy[0].description.has_value());
  CHECK(with_mask.prompt.find("0.8503") != std::string::npos);
  CHECK(with_mask.prompt.find("## Anatomical findings") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.path / "case_atelectasis.json"));
}

TEST_CASE("an unreachable reasoner falls back") {
  TempDir tmp("fallback");
  auto config = case_config(tmp.path);
  reasoning::ReasonerEndpoint ep;
  ep.url = "http://127.0.0.1:1/v1/chat/completions";
  ep.retries = 0;
  ep.timeout = std::chrono::milliseconds(300);
  config.reasoner = ep;
  auto rec = run_study(config, default_inputs(config, "case_opacity"), false);
  CHECK(rec.decision == DecisionSource::kFallback);
  CHECK(rec.has_flag("reasoner-fallback"));
  CHECK_FALSE(rec.failed);
  REQUIRE(rec.errors.size() == 1);
  CHECK(rec.errors[0].stage == "reasoner");

  config.fallback = false;
  auto strict = run_study(config, default_inputs(config, "case_opacity"), false);
  CHECK(strict.decision == DecisionSource::kNone);
  CHECK(strict.failed);
  CHECK(strict.diagnosis() == nullptr);
}

TEST_CASE("agent failures are recorded, not thrown") {
  TempDir tmp("missing");
  auto config = case_config(tmp.path);
  auto rec = run_study(config, {"does_not_exist", "", std::nullopt}, false);
  CHECK(rec.failed);
  CHECK_FALSE(rec.errors.empty());
  CHECK(rec.errors.front().kind == "not-found");
}

TEST_CASE("evaluation counting") {
  SUBCASE("a perfect column") {
    std::vector<StudyRecord> records;
    reward::GroundTruthSet gt;
    for (int i = 0; i < 20; ++i) {
      const std::string id = "s" + std::to_string(i);
      const bool present = i % 3 == 0;
      records.push_back(decided(id, {{Pathology::kFracture, present ? 0.9 : 0.1}}));
      gt[id] = truth(id, {{Pathology::kFracture, present ? Label::kPresent : Label::kAbsent}});
    }
    auto t = evaluate(records, gt);
    CHECK(t.at(Pathology::kFracture).total == 20);
    CHECK(t.at(Pathology::kFracture).accuracy() == 1.0);
    CHECK(t.macro == 1.0);
    CHECK(render_table(t).find("1.000") != std::string::npos);
  }
  SUBCASE("a three-study hand count") {
    std::vector<StudyRecord> records = {
        decided("a", {{Pathology::kEdema, 0.7}, {Pathology::kAtelectasis, 0.2}}),
        decided("b", {{Pathology::kEdema, 0.4}}),
        decided("c", {{Pathology::kAtelectasis, 0.5}}),
        decided("a", {{Pathology::kEdema, 0.0}}),  // duplicate: ignored
    };
    reward::GroundTruthSet gt = {
        {"a", truth("a", {{Pathology::kEdema, Label::kPresent}, {Pathology::kAtelectasis, Label::kPresent}})},
        {"b", truth("b", {{Pathology::kEdema, Label::kPresent}, {Pathology::kAtelectasis, Label::kUncertain}})},
        {"c", truth("c", {{Pathology::kAtelectasis, Label::kPresent}, {Pathology::kEdema, Label::kAbsent}})},
    };
    auto t = evaluate(records, gt);
    // Edema: a right, b wrong, c right. Atelectasis: a wrong, c right.
    CHECK(t.at(Pathology::kEdema).correct == 2);
    CHECK(t.at(Pathology::kEdema).total == 3);
    CHECK(t.at(Pathology::kAtelectasis).correct == 1);
    CHECK(t.at(Pathology::kAtelectasis).total == 2);
    CHECK(t.pooled_correct == 3);
    CHECK(t.pooled_total == 5);
    CHECK(t.macro == doctest::Approx((2.0 / 3 + 0.5) / 2));
    CHECK(t.micro == doctest::Approx(0.6));
    CHECK(t.duplicates == 1);
    CHECK(t.studies == 3);
    const auto text = render_table(t);
    CHECK(text.find("Overall (macro)") != std::string::npos);
    CHECK(text.find(" - ") != std::string::npos);
  }
  SUBCASE("skips") {
    StudyRecord undecided;
    undecided.study_id = "u";
    auto t = evaluate({decided("x", {}), undecided}, {{"u", truth("u", {{Pathology::kEdema, Label::kAbsent}})}});
    CHECK(t.skipped_no_truth == 1);
    CHECK(t.skipped_no_decision == 1);
    CHECK(t.pooled_total == 0);
  }
  SUBCASE("identical predictions score 1") {
    std::vector<StudyRecord> records;
    reward::GroundTruthSet gt;
    for (int i = 0; i < 5; ++i) {
      const std::string id = "r" + std::to_string(i);
      std::map<Pathology, double> probs;
      std::map<Pathology, Label> labels;
      for (Pathology p : agents::kEvalLabels) {
        const bool on = (i + static_cast<int>(p)) % 2 == 0;
        probs[p] = on ? 1.0 : 0.0;
        labels[p] = on ? Label::kPresent : Label::kAbsent;
      }
      records.push_back(decided(id, probs));
      gt[id] = truth(id, labels);
    }
    auto t = evaluate(records, gt);
    CHECK(t.macro == 1.0);
    CHECK(t.micro == 1.0);
  }
}

TEST_CASE("fixture validation") {
  auto config = load_config(kFixtures / "case_studies" / "config.json");
  auto rep = validate_fixtures(kFixtures / "case_studies", config);
  for (const auto& i : rep.issues) MESSAGE(i.file.string() << ": " << i.message);
  CHECK(rep.ok());
  CHECK(rep.studies == 3);

  TempDir tmp("badfix");
  fs::create_directories(tmp.path / "s1");
  raster::write_text_file(tmp.path / "s1" / "agent3.json", "{\"agent_id\": 3, \"study_id\": \"s1\", \"scores\": {}}");
  raster::write_text_file(tmp.path / "s1" / "report_chexagent.txt", "");
  CHECK_FALSE(validate_fixtures(tmp.path, default_config()).ok());
}

TEST_CASE("command line") {
  std::string out, err;
  const auto dir = kFixtures / "anatomy" / "effusion_left_lower";
  CHECK(run_cli({"correlate", (dir / "heatmap.grid").string(), (dir / "mask.grid").string()}, &out) == 0);
  CHECK(out.find("LeftLower         1.000") != std::string::npos);
  CHECK(out.find("dominant LeftLower") != std::string::npos);

  CHECK(run_cli({"frobnicate"}, &out, &err) == 1);
  CHECK_FALSE(err.empty());
  CHECK(run_cli({}, &out, &err) == 1);
  CHECK(run_cli({"correlate", (dir / "heatmap.grid").string(), (dir / "heatmap.grid").string()}, &out, &err) == 1);

  CHECK(run_cli({"fixtures", "validate", (kFixtures / "case_studies").string(), "--config",
             (kFixtures / "case_studies" / "config.json").string()},
            &out) == 0);
}

TEST_CASE("command line runs are reproducible") {
  TempDir a("run_a"), b("run_b");
  const auto cfg = (kFixtures / "case_studies" / "config.json").string();
  const auto target = (kFixtures / "case_studies").string();
  std::string out;
  REQUIRE(run_cli({"--config", cfg, "run", target, "--out", a.path.string()}, &out) == 0);
  CHECK(out.find("case_pneumonia: ok") != std::string::npos);
  REQUIRE(run_cli({"--config", cfg, "run", target, "--out", b.path.string(), "--serial"}) == 0);
  for (const char* id : {"case_opacity", "case_pneumonia", "case_atelectasis"}) {
    const auto name = std::string(id) + ".json";
    CHECK(strip_times(raster::read_text_file(a.path / name)) == strip_times(raster::read_text_file(b.path / name)));
  }

  // Records evaluate through the eval subcommand.
  TempDir gt_dir("gt");
  raster::write_text_file(gt_dir.path / "gt.csv", "study_id,Atelectasis,Pneumonia\ncase_atelectasis,1,\ncase_pneumonia,,1\ncase_opacity,,1\n");
  CHECK(run_cli({"eval", a.path.string(), (gt_dir.path / "gt.csv").string()}, &out) == 0);
  CHECK(out.find("Atelectasis") != std::string::npos);
}
