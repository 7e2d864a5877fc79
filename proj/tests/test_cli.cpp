#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "screening/cli.hpp"
#include "screening/csv.hpp"

namespace fs = std::filesystem;
using screening::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("screening_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    for (const auto f : screening::csv::split(line)) row.emplace_back(f);
    rows.push_back(row);
  }
  return rows;
}

const char* kSmallReplicate = R"({
  "dataset_spec": {"n_participants": 8, "n_deceptive": 4, "target_total_vectors": 416},
  "hyperparams": {"epochs": 40, "grouped_folds": 3, "leaked_folds": 3}
})";

}  // namespace

TEST_CASE("posterior table") {
  const auto dir = fresh_dir("posterior");
  const auto r = invoke({"posterior", "--sensitivity", "0.7366", "--specificity", "0.7555", "--prior", "0.05",
                         "--population", "1000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("13.69%") != std::string::npos);
  CHECK(r.out.find("98.20%") != std::string::npos);
  CHECK(r.out.find("24.92%") != std::string::npos);

  const auto j = nlohmann::json::parse(slurp(dir / "posterior.json"));
  CHECK(j["ppv"].get<double>() == doctest::Approx(0.1369).epsilon(1e-3));
  CHECK(j["breakeven_prior"].get<double>() == doctest::Approx(0.2492).epsilon(2e-3));
  CHECK(fs::exists(dir / "effective_config.json"));
}

TEST_CASE("configuration errors exit 2 and name the field") {
  const auto dir = fresh_dir("errors");
  auto r = invoke({"posterior", "--prior", "1.5", "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("prior") != std::string::npos);

  r = invoke({"simulate", "--prior", "0.05", "--replicates", "0", "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("replicates") != std::string::npos);

  r = invoke({"posterior", "--out", dir.string()});
  CHECK(r.code == 2);

  r = invoke({"frobnicate"});
  CHECK(r.code == 2);
  r = invoke({});
  CHECK(r.code == 2);
  r = invoke({"posterior", "--prior", "abc"});
  CHECK(r.code == 2);

  const auto cfg = dir / "bad.json";
  std::ofstream(cfg) << R"({"hyperparams": {"epoks": 3}})";
  r = invoke({"posterior", "--prior", "0.05", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("hyperparams.epoks") != std::string::npos);

  std::ofstream(dir / "broken.json") << "{ not json";
  r = invoke({"posterior", "--config", (dir / "broken.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);

  std::ofstream(dir / "spec.json") << R"({"dataset_spec": {"n_deceptive": 40}})";
  r = invoke({"diagnose", "--config", (dir / "spec.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("n_deceptive") != std::string::npos);
}

TEST_CASE("runtime errors exit 3") {
  const auto dir = fresh_dir("runtime");
  std::ofstream(dir / "tiny.json")
      << R"({"dataset_spec": {"n_participants": 2, "n_deceptive": 1, "target_total_vectors": 52}})";
  const auto r = invoke({"replicate", "--config", (dir / "tiny.json").string(), "--out", dir.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("participants") != std::string::npos);
}

TEST_CASE("prior zero") {
  const auto dir = fresh_dir("zero");
  // No positives at all (perfect specificity): PPV is undefined.
  auto r = invoke({"posterior", "--prior", "0", "--specificity", "1", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("PPV  P(Lie | +) = undefined") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(dir / "posterior.json"))["ppv"].is_null());

  // Default test: every positive is false, so the PPV is exactly 0.
  r = invoke({"posterior", "--prior", "0", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("PPV  P(Lie | +) = 0.00%") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(dir / "posterior.json"))["ppv"].get<double>() == 0.0);
}

TEST_CASE("flags override the config file") {
  const auto dir = fresh_dir("precedence");
  std::ofstream(dir / "c.json") << R"({"test": {"sensitivity": 0.9, "specificity": 0.9}, "prior": 0.3})";
  REQUIRE(invoke({"posterior", "--config", (dir / "c.json").string(), "--prior", "0.5", "--out", dir.string()})
              .code == 0);
  const auto eff = nlohmann::json::parse(slurp(dir / "effective_config.json"));
  CHECK(eff["prior"].get<double>() == 0.5);
  CHECK(eff["test"]["sensitivity"].get<double>() == 0.9);
  const auto post = nlohmann::json::parse(slurp(dir / "posterior.json"));
  CHECK(post["ppv"].get<double>() == doctest::Approx(0.9));
}

TEST_CASE("sweep csv") {
  const auto dir = fresh_dir("sweep");
  REQUIRE(invoke({"sweep", "--out", dir.string()}).code == 0);
  auto rows = csv_rows(dir / "sweep.csv");
  CHECK(rows.size() == 200);
  CHECK(fs::exists(dir / "sweep.svg"));

  // A grid whose only point is 0.05.
  REQUIRE(invoke({"sweep", "--grid-min", "0.05", "--grid-max", "0.05", "--grid-points", "1", "--out",
                  dir.string()})
              .code == 0);
  rows = csv_rows(dir / "sweep.csv");
  REQUIRE(rows.size() == 1);
  CHECK(std::stod(rows[0][0]) == 0.05);
  CHECK(std::abs(std::stod(rows[0][1]) - 0.1369) < 1e-4);

  REQUIRE(invoke({"sweep", "--sensitivity", "1", "--specificity", "1", "--out", dir.string()}).code == 0);
  for (const auto& row : csv_rows(dir / "sweep.csv")) CHECK(std::stod(row[1]) == 1.0);
}

TEST_CASE("event tree output") {
  const auto dir = fresh_dir("tree");
  auto r = invoke({"tree", "--prior", "0.01", "--population", "10000", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("2420.55") != std::string::npos);
  CHECK(fs::exists(dir / "tree.svg"));

  r = invoke({"tree", "--prior", "0.05", "--population", "1", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("0.0368") != std::string::npos);

  r = invoke({"tree", "--prior", "1", "--population", "100", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("No-lie") == std::string::npos);
}

TEST_CASE("simulate writes per-replicate counts") {
  const auto dir = fresh_dir("simulate");
  REQUIRE(invoke({"simulate", "--prior", "0.05", "--population", "1000", "--replicates", "12", "--seed", "3",
                  "--out", dir.string()})
              .code == 0);
  const auto rows = csv_rows(dir / "simulation.csv");
  REQUIRE(rows.size() == 12);
  for (const auto& row : rows) {
    long total = 0;
    for (std::size_t k = 1; k < 5; ++k) total += std::stol(row[k]);
    CHECK(total == 1000);
  }
  const auto j = nlohmann::json::parse(slurp(dir / "simulation.json"));
  CHECK(j["seed"] == 3);
}

TEST_CASE("replicate and diagnose on a small dataset, byte-identical reruns") {
  const auto a = fresh_dir("replicate_a");
  const auto b = fresh_dir("replicate_b");
  std::ofstream(a / "c.json") << kSmallReplicate;
  for (const auto& dir : {a, b}) {
    const auto r = invoke({"replicate", "--config", (a / "c.json").string(), "--export-dataset", "--out",
                           dir.string()});
    REQUIRE(r.code == 0);
  }
  for (const char* name : {"grouped_summary.csv", "leaked_summary.csv", "comparison.csv", "gap.json",
                           "protocols.json", "dataset.csv", "effective_config.json"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK(csv_rows(a / "grouped_summary.csv").size() == 3 + 2);

  // The exported dataset feeds diagnose.
  const auto r = invoke({"diagnose", "--dataset", (a / "dataset.csv").string(), "--out", a.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(a / "diagnostics.json"));
  CHECK(j["n_groups"] == 6);
  CHECK(j["cod_flag"] == true);
}

TEST_CASE("diagnose the default dataset") {
  const auto dir = fresh_dir("diagnose");
  const auto r = invoke({"diagnose", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "diagnostics.json"));
  CHECK(j["cod_flag"] == true);
  CHECK(j["n_groups"] == 30);
  CHECK(j["total_segments"] == 86528);
}

TEST_CASE("the installed binary reports exit codes") {
  const auto dir = fresh_dir("binary");
  const std::string bin = SCREENING_AUDIT_BIN;
  const std::string quiet = " > " + (dir / "log.txt").string() + " 2>&1";
  auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
  CHECK(status(std::system((bin + " posterior --prior 0.05 --out " + dir.string() + quiet).c_str())) == 0);
  CHECK(status(std::system((bin + " posterior --prior 1.5 --out " + dir.string() + quiet).c_str())) == 2);
}
