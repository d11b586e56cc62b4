// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "oracles.hpp"
#include "radfabric/agents/backends.hpp"
#include "radfabric/mcp/client.hpp"
#include "radfabric/mcp/server.hpp"
#include "radfabric/orchestrator/evaluate.hpp"
#include "radfabric/orchestrator/pipeline.hpp"
#include "radfabric/raster/grid_io.hpp"
#include "radfabric/reward/reward.hpp"
#include "relay.hpp"

using namespace radfabric;
using agents::Pathology;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = RADFABRIC_FIXTURE_DIR;

// Collects failure notes for one criterion.
struct Check {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok && problems.size() < 8) problems.push_back(what);
  }
  bool ok() const { return problems.empty(); }
};

int run_criterion(const char* id, const char* title, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.problems.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) {
    c.problems.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(budget_s) + " s");
  }
  std::printf("[%s] %s %s (%.3f s)\n", c.ok() ? "PASS" : "FAIL", id, title, secs);
  for (const auto& p : c.problems) std::printf("       %s\n", p.c_str());
  std::fflush(stdout);
  return c.ok() ? 0 : 1;
}

// ---- AC1 -----------------------------------------------------------------

std::vector<mcp::Tool> three_tools() {
  json num = {{"type", "number"}};
  std::vector<mcp::Tool> tools;
  tools.push_back({{"add", "Sum of a and b",
                    {{"type", "object"},
                     {"properties", {{"a", num}, {"b", num}}},
                     {"required", {"a", "b"}},
                     {"additionalProperties", false}}},
                   [](const json& a) { return json{{"sum", a["a"].get<double>() + a["b"].get<double>()}}; }});
  tools.push_back({{"echo", "Returns its arguments", {{"type", "object"}}}, [](const json& a) { return a; }});
  tools.push_back({{"stats", "Count and sum of a list",
                    {{"type", "object"},
                     {"properties", {{"xs", {{"type", "array"}, {"items", num}}}}},
                     {"required", {"xs"}}}},
                   [](const json& a) {
                     double s = 0;
                     for (const auto& x : a["xs"]) s += x.get<double>();
                     return json{{"n", a["xs"].size()}, {"sum", s}};
                   }});
  return tools;
}

void ac1(Check& c) {
  auto [client_end, server_end] = mcp::make_loopback_pair();
  auto server = std::make_shared<const mcp::Server>(three_tools());
  mcp::LineChannel* raw_server = server_end.get();
  std::thread serving([&] { server->serve_channel(*raw_server); });

  auto relayed = std::make_unique<relay::ReorderingChannel>(std::move(client_end), 20241017, 5);
  auto* view = relayed.get();
  {
    mcp::Client client(std::move(relayed), std::chrono::seconds(3));
    auto listed = client.list_tools();
    c.expect(listed.size() == 3, "tools/list returned " + std::to_string(listed.size()) + " tools");
    for (std::size_t i = 0; i < listed.size(); ++i) {
      c.expect(listed[i].name == three_tools()[i].spec.name, "tool order differs at " + std::to_string(i));
    }

    // 100 calls from 10 concurrent callers; each call's expected result is
    // computed locally from its own arguments.
    std::mutex mu;
    int mismatches = 0, done = 0;
    std::vector<std::thread> callers;
    for (int t = 0; t < 10; ++t) {
      callers.emplace_back([&, t] {
        std::mt19937_64 rng(1000 + t);
        std::uniform_real_distribution<double> u(-100, 100);
        for (int k = 0; k < 10; ++k) {
          std::string name;
          json args, expected;
          switch (rng() % 3) {
            case 0: {
              const double a = u(rng), b = u(rng);
              name = "add";
              args = {{"a", a}, {"b", b}};
              expected = {{"sum", a + b}};
              break;
            }
            case 1:
              name = "echo";
              args = {{"caller", t}, {"seq", k}, {"tags", json::array({u(rng), "x", nullptr})}};
              expected = args;
              break;
            default: {
              json xs = json::array();
              double s = 0;
              for (std::size_t n = rng() % 6; n > 0; --n) {
                const double v = u(rng);
                xs.push_back(v);
                s += v;
              }
              name = "stats";
              args = {{"xs", xs}};
              expected = {{"n", xs.size()}, {"sum", s}};
            }
          }
          json got = client.call_tool(name, args);
          std::lock_guard lock(mu);
          ++done;
          if (got != expected) ++mismatches;
        }
      });
    }
    for (auto& th : callers) th.join();
    c.expect(done == 100, std::to_string(done) + " calls completed");
    c.expect(mismatches == 0, std::to_string(mismatches) + " mismatched results");
    c.expect(view->reordered() > 0, "relay never reordered a response");
    std::printf("       %zu responses delivered out of order\n", view->reordered());
    client.close();
  }
  raw_server->close();
  serving.join();
}

// ---- AC2 -----------------------------------------------------------------

void ac2(Check& c) {
  std::mt19937_64 rng(2);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 1 + rng() % 3, w = 1 + rng() % 4, h = 1 + rng() % 4;
    auto stack = oracle::random_stack(rng, k, w, h);
    const std::size_t ow = 1 + rng() % 16, oh = 1 + rng() % 16;
    auto mine = raster::gradcam(stack, ow, oh);
    auto ref = oracle::gradcam(stack, ow, oh);
    for (std::size_t j = 0; j < ref.size(); ++j) worst = std::max(worst, std::abs(mine.cells()[j] - ref.cells()[j]));
  }
  c.expect(worst <= 1e-12, "max deviation " + std::to_string(worst));
  for (int i = 0; i < 50; ++i) {
    auto stack = oracle::random_stack(rng, 1 + rng() % 3, 1 + rng() % 4, 1 + rng() % 4);
    for (auto& g : stack.gradients) g = raster::RealGrid(g.width(), g.height(), 0.0);
    const auto map = raster::gradcam(stack, 8, 8);
    for (double v : map.cells()) c.expect(v == 0.0, "zero-gradient stack produced a nonzero cell");
  }
}

// ---- AC3 -----------------------------------------------------------------

void ac3(Check& c) {
  std::mt19937_64 rng(3);
  int compared = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t w = 1 + rng() % 16, h = 1 + rng() % 16;
    auto hm = oracle::random_heatmap(rng, w, h);
    auto mask = oracle::random_mask(rng, w, h);
    for (double tau : {0.0, 0.4, 0.9}) {
      auto got = anatomy::correlate(hm, mask, tau);
      auto want = oracle::overlap(hm, mask, tau);
      ++compared;
      const bool same = got.active_mass == want.mass && got.active_cells == want.active &&
                        got.fractions == want.fractions && got.iou == want.iou &&
                        got.dominant == want.dominant && got.centroid.has_value() == want.has_centroid &&
                        (!want.has_centroid || (got.centroid->x == want.cx && got.centroid->y == want.cy));
      c.expect(same, "pair " + std::to_string(i) + " tau " + std::to_string(tau) + " differs");
      if (got.has_activation()) {
        const double total = std::accumulate(got.fractions.begin(), got.fractions.end(), 0.0);
        c.expect(std::abs(total - 1.0) <= 1e-9, "fractions sum to " + std::to_string(total));
      }
    }
  }
  c.expect(compared == 1500, "compared " + std::to_string(compared));
}

// ---- AC4 -----------------------------------------------------------------

void ac4(Check& c) {
  const auto dir = kFixtures / "anatomy" / "effusion_left_lower";
  auto mask = anatomy::ensure_partitioned(raster::read_mask(dir / "mask.grid"));
  auto corr = anatomy::correlate(raster::read_heatmap(dir / "heatmap.grid"), mask);
  c.expect(corr.dominant == raster::Region::kLeftLower, "dominant region is not LeftLower");
  const std::string want =
      "The effusion is localized to the left lower lung field, with associated blunting of the costophrenic angle.";
  const std::string got = anatomy::describe(Pathology::kPleuralEffusion, corr).sentence;
  c.expect(got == want, "got \"" + got + "\"");
}

// ---- AC5 -----------------------------------------------------------------

void ac5(Check& c) {
  // Coverage rows by hand, one character per agent 1..7.
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"Atelectasis", "XX.XXXX"},        {"Cardiomegaly", "XX.XXXX"},
      {"Consolidation", "XX.XXXX"},      {"Edema", "XX.XXXX"},
      {"Effusion", "XX..XXX"},           {"Emphysema", "X..XX.."},
      {"Enlarged Cardiomediastinum", "XX....."},
      {"Fracture", "XX..X.."},           {"Fibrosis", "X..XX.."},
      {"Hernia", "X..XX.."},             {"Infiltration", "X...X.."},
      {"Lung Lesion", "XX....."},        {"Lung Opacity", "XXX...."},
      {"Mass", "X..XX.."},               {"Nodule", "X..XX.."},
      {"Pleural Other", "......."},      {"Pleural Thickening", "X..XX.."},
      {"Pneumonia", "XXXXX.."},          {"Pneumothorax", "XX.XX.."},
  };
  std::vector<agents::AgentSpec> cxr;
  for (const auto& s : agents::default_registry())
    if (s.kind == agents::AgentKind::kCxr) cxr.push_back(s);
  c.expect(cxr.size() == 7, std::to_string(cxr.size()) + " CXR agents");
  if (cxr.size() != 7) return;

  std::array<std::set<Pathology>, 7> expected;
  int cells = 0;
  for (const auto& [label, marks] : rows) {
    const Pathology p = agents::parse_pathology(label);
    for (int k = 0; k < 7; ++k) {
      ++cells;
      if (marks[k] == 'X') expected[k].insert(p);
      c.expect(cxr[k].covers(p) == (marks[k] == 'X'), label + " / agent " + std::to_string(k + 1));
    }
  }
  for (int k = 0; k < 7; ++k) {
    c.expect(cxr[k].id == k + 1, "agent position " + std::to_string(k) + " has id " + std::to_string(cxr[k].id));
    c.expect(cxr[k].coverage == expected[k], "agent " + std::to_string(k + 1) + " coverage set differs");
  }
  c.expect(cells == 133, "checked " + std::to_string(cells) + " cells");
}

// ---- AC6 -----------------------------------------------------------------

void ac6(Check& c) {
  auto config = orchestrator::load_config(kFixtures / "case_studies" / "config.json");
  struct Expect {
    const char* study;
    int agent;
    Pathology p;
    double score;
    const char* text;
  };
  const Expect expected_scores[] = {
      {"case_opacity", 3, Pathology::kLungOpacity, 0.7804, "0.7804"},
      {"case_opacity", 3, Pathology::kPneumonia, 0.8529, "0.8529"},
      {"case_pneumonia", 2, Pathology::kLungOpacity, 0.861, "0.861"},
      {"case_pneumonia", 3, Pathology::kLungOpacity, 0.7746, "0.7746"},
      {"case_pneumonia", 3, Pathology::kPneumonia, 0.6436, "0.6436"},
      {"case_pneumonia", 7, Pathology::kPneumonia, 0.9656, "0.9656"},
      {"case_atelectasis", 1, Pathology::kAtelectasis, 0.8503, "0.8503"},
  };
  std::map<std::string, orchestrator::StudyRecord> records;
  for (const char* id : {"case_opacity", "case_pneumonia", "case_atelectasis"}) {
    auto rec = orchestrator::run_study(config, orchestrator::default_inputs(config, id), false);
    c.expect(!rec.failed, std::string(id) + " failed");
    records.emplace(id, std::move(rec));
  }
  for (const auto& e : expected_scores) {
    const auto& rec = records.at(e.study);
    bool found = false;
    for (const auto& f : rec.finding_sets) {
      if (f.agent_id != e.agent) continue;
      auto it = f.scores.find(e.p);
      found = it != f.scores.end() && it->second == e.score;
    }
    c.expect(found, std::string(e.study) + " agent " + std::to_string(e.agent) + " lacks " + e.text);
    const std::string line = rec.prompt.find(std::string(": ") + e.text + "\n") != std::string::npos ? "ok" : "";
    c.expect(!line.empty(), std::string(e.study) + " prompt lacks " + e.text);
  }
  const auto& case_pneumonia = records.at("case_pneumonia");
  auto pkg = reasoning::assemble_evidence(case_pneumonia.finding_sets, {}, case_pneumonia.reports);
  const auto& pneu = reasoning::cross_validate(pkg, 0.3).at(Pathology::kPneumonia);
  c.expect(pneu.contradiction, "no pneumonia contradiction at delta 0.3");
  c.expect(case_pneumonia.prompt.find("(agents disagree)") != std::string::npos, "prompt does not mark the disagreement");
}

// ---- AC7 -----------------------------------------------------------------

void ac7(Check& c) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const std::string alphabet = "abcdefghij XYZ{}[]\"\\\n\t<>/:,.%0123456789";
  int round_trips = 0, mutants = 0;
  auto random_vector = [&] {
    reasoning::DiagnosisVector d;
    for (Pathology p : agents::kEvalLabels) {
      const auto r = rng() % 10;
      d.probabilities[p] = r == 0 ? 0.0 : r == 1 ? 1.0 : u(rng);
    }
    return d;
  };
  while (round_trips < 1000) {
    std::string think;
    for (std::size_t n = rng() % 80; n > 0; --n) think += alphabet[rng() % alphabet.size()];
    if (think.find("</think>") != std::string::npos) continue;
    const auto d = random_vector();
    const auto raw = reasoning::render_transcript(think, d);
    const auto t = reasoning::parse_transcript(raw);
    c.expect(t.think == think && t.answer == d && t.missing_labels.empty(),
             "round trip " + std::to_string(round_trips) + " differs");
    ++round_trips;

    // Mutations that must each score format 0.
    std::vector<std::string> bad;
    std::string m = raw;
    m.erase(m.find("<think>"), 7);
    bad.push_back(m);
    m = raw;
    m.erase(m.find("</think>"), 8);
    bad.push_back(m);
    m = raw;
    bad.push_back(m.substr(0, m.find("\\boxed{")));
    m = raw;
    const auto colon = m.find(':', m.find("\\boxed{"));
    const auto end = m.find_first_of(",}", colon);
    const double v = d.probabilities.begin()->second;
    m.replace(colon + 1, end - colon - 1, "\"" + std::to_string(static_cast<int>(v * 100)) + "%\"");
    bad.push_back(m);
    for (const auto& b : bad) {
      ++mutants;
      c.expect(reward::format_reward(b) == 0, "mutant scored format 1: " + b.substr(0, 60));
    }
  }
  c.expect(mutants == 4000, std::to_string(mutants) + " mutants");

  // Ten labeled columns, eight matched at threshold 0.5.
  reward::GroundTruth gt;
  reasoning::DiagnosisVector pred;
  const int truth[14] = {1, 0, 1, 0, 1, 0, 1, 0, 1, 0, -1, -1, 2, 2};
  const double prob[14] = {0.9, 0.1, 0.5, 0.2, 0.7, 0.0, 0.6, 0.3, 0.49, 0.8, 1.0, 0.0, 1.0, 0.0};
  for (std::size_t i = 0; i < 14; ++i) {
    pred.probabilities[agents::kEvalLabels[i]] = prob[i];
    if (truth[i] != 2) gt.labels[agents::kEvalLabels[i]] = static_cast<reward::Label>(truth[i]);
  }
  const auto b = reward::total_reward(reasoning::render_transcript("hand built", pred), gt);
  c.expect(b.labeled == 10 && b.matched == 8, "labeled/matched " + std::to_string(b.labeled) + "/" + std::to_string(b.matched));
  c.expect(std::abs(b.accuracy - 0.8) < 1e-12, "accuracy " + std::to_string(b.accuracy));
  c.expect(std::abs(b.total - 0.82) < 1e-12, "total " + std::to_string(b.total));
}

// ---- AC8 -----------------------------------------------------------------

void ac8(Check& c) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> r(2 + rng() % 63);
    for (double& x : r) x = u(rng);
    const auto a = reward::group_advantage(r);
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / double(a.size());
    c.expect(std::abs(mean) <= 1e-12, "mean advantage " + std::to_string(mean));
  }
  for (double level : {0.0, 0.37, 1.0}) {
    for (double x : reward::group_advantage(std::vector<double>(6, level))) {
      c.expect(x == 0.0, "equal rewards gave a nonzero advantage");
    }
  }
  const auto pair = reward::group_advantage({0.0, 1.0}, 1e-8);
  c.expect(std::abs(pair[0] + 1) <= 1e-6 && std::abs(pair[1] - 1) <= 1e-6, "[0,1] did not map to [-1,1]");
}

// ---- AC9 -----------------------------------------------------------------

void ac9(Check& c) {
  const fs::path root = kFixtures / "synthetic";
  const auto gt = reward::load_ground_truth_csv(root / "gt.csv");
  const auto manifest = orchestrator::load_manifest(root);
  c.expect(manifest.studies.size() == 10, std::to_string(manifest.studies.size()) + " studies");

  std::vector<orchestrator::EvalTable> tables;
  for (int pass = 0; pass < 2; ++pass) {
    auto config = orchestrator::load_config(root / "config.json");
    config.out_dir = fs::temp_directory_path() / ("radfabric_ac9_" + std::to_string(::getpid()) + "_" + std::to_string(pass));
    const auto records = orchestrator::run_dataset(config, manifest);
    for (const auto& r : records) {
      c.expect(r.decision == orchestrator::DecisionSource::kFallback, r.study_id + " did not use the fallback");
    }
    // Score what was persisted, so the round trip through disk is covered too.
    std::vector<orchestrator::StudyRecord> loaded;
    for (const auto& s : manifest.studies) loaded.push_back(orchestrator::load_record(config.out_dir / (s.study_id + ".json")));
    tables.push_back(orchestrator::evaluate(loaded, gt));
    fs::remove_all(config.out_dir);
  }
  c.expect(tables[0] == tables[1], "the two runs produced different tables");

  // Per-label counts come from the independent Python oracle in fixtures/generate.py.
  const std::pair<int, int> frozen[14] = {{4, 7}, {2, 8}, {5, 6}, {3, 7}, {3, 5}, {10, 10}, {2, 4},
                                          {1, 5}, {4, 4}, {4, 5}, {4, 6}, {3, 7}, {4, 6}, {4, 7}};
  const auto& t = tables[0];
  for (std::size_t i = 0; i < 14; ++i) {
    const auto& cell = t.at(agents::kEvalLabels[i]);
    c.expect(cell.correct == frozen[i].first && cell.total == frozen[i].second,
             std::string(agents::display_name(agents::kEvalLabels[i])) + " " + std::to_string(cell.correct) + "/" +
                 std::to_string(cell.total));
  }
  c.expect(t.pooled_correct == 53 && t.pooled_total == 87, "pooled counts differ");
  c.expect(t.macro == 0.6083333333333334, "macro " + raster::format_real(t.macro));
  c.expect(t.micro == 53.0 / 87.0, "micro " + raster::format_real(t.micro));

  const auto text = orchestrator::render_table(t);
  const auto header = text.find("Fracture");
  c.expect(header != std::string::npos, "table has no Fracture column");
  std::istringstream lines(text);
  std::string line, head_line, row_line;
  while (std::getline(lines, line)) {
    if (line.find("Fracture") != std::string::npos) {
      head_line = line;
      std::getline(lines, line);  // dashes
      std::getline(lines, row_line);
      break;
    }
  }
  const auto col = head_line.find("Fracture");
  c.expect(col != std::string::npos && row_line.size() >= col + 5 && row_line.find("1.000", col) != std::string::npos &&
               row_line.find("1.000", col) < col + 10,
           "Fracture column does not show 1.000");
  std::printf("%s", text.c_str());
}

}  // namespace

int main() {
  int failures = 0;
  failures += run_criterion("AC1", "MCP round trip under reordering", 5, ac1);
  failures += run_criterion("AC2", "Grad-CAM against brute force", 2, ac2);
  failures += run_criterion("AC3", "correlation against per-cell oracle", 5, ac3);
  failures += run_criterion("AC4", "effusion sentence", 0, ac4);
  failures += run_criterion("AC5", "coverage matrix", 0, ac5);
  failures += run_criterion("AC6", "case-study scores and contradiction", 0, ac6);
  failures += run_criterion("AC7", "transcript round trip and reward", 5, ac7);
  failures += run_criterion("AC8", "group advantage", 0, ac8);
  failures += run_criterion("AC9", "synthetic dataset determinism and counts", 30, ac9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
