#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "iqb/adapter.hpp"
#include "iqb/aggregate.hpp"
#include "iqb/csv.hpp"
#include "iqb/fixture.hpp"
#include "iqb/percentile.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace iqb;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Runs the CLI with stdout/stderr captured through temp files.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "iqb_cli_tests";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter));
  const fs::path err = dir / ("err" + std::to_string(counter));
  ++counter;

  const std::string command = env + (env.empty() ? "" : " ") + IQB_CLI_PATH + " " +
                              args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

const std::string kConfig = std::string(IQB_CONFIGS_DIR) + "/iqb.example.json";

// Fixture CSV where only gaming latency fails at the high level, one file for
// all three datasets.
fs::path golden_fixture_csv() {
  static fs::path path;
  if (path.empty()) {
    auto spec = FixtureSpec::all_pass("r1", {"cloudflare", "ndt", "ookla"}, 40);
    spec.set_outcome(UseCase::Gaming, Metric::Latency, false);
    const auto records = generate_fixture(42, spec, test::example_thresholds());
    path = fs::temp_directory_path() / "iqb_cli_tests" / "golden.csv";
    fs::create_directories(path.parent_path());
    spit(path, format_measurement_csv(records));
  }
  return path;
}

std::string strip_started_at(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.find("\"started_at\"") != std::string::npos) continue;
    out += line + "\n";
  }
  return out;
}

double extract_s_iqb(const std::string& json) {
  const auto pos = json.find("\"s_iqb\": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(json.substr(pos + 9));
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate: example config exits 0 with no findings") {
  const auto result = run_cli("validate " + kConfig);
  CHECK(result.exit_code == 0);
  CHECK(result.out.empty());
}

TEST_CASE("validate: out-of-range weight exits 1 with one finding line") {
  const fs::path dir = fs::temp_directory_path() / "iqb_cli_tests";
  fs::create_directories(dir);
  const fs::path bad = dir / "bad_weight.json";
  std::string text = slurp(kConfig);
  // Push one weight out of range.
  const auto pos = text.find("\"latency\": 5");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 12, "\"latency\": 7");
  spit(bad, text);

  const auto result = run_cli("validate " + bad.string());
  CHECK(result.exit_code == 1);
  CHECK(result.out.find("weight out of range") != std::string::npos);
  CHECK(result.out.find("weights.requirements.gaming.latency") != std::string::npos);
}

TEST_CASE("validate: missing thresholds section exits 2") {
  const fs::path dir = fs::temp_directory_path() / "iqb_cli_tests";
  fs::create_directories(dir);
  const fs::path bad = dir / "no_thresholds.json";
  spit(bad, R"({"datasets": [{"id": "ndt", "granularity": "per_test"}]})");
  const auto result = run_cli("validate " + bad.string());
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("thresholds") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("score -c " + kConfig).exit_code == 2);          // no inputs
  CHECK(run_cli("frobnicate").exit_code == 2);                   // unknown command
  CHECK(run_cli("score " + golden_fixture_csv().string()).exit_code == 2);  // no config
  const auto bad_level = run_cli("score -c " + kConfig + " " +
                                 golden_fixture_csv().string() + " --level best");
  CHECK(bad_level.exit_code == 2);
}

TEST_CASE("IQB_CONFIG is the config fallback") {
  const auto result = run_cli("validate", "IQB_CONFIG=" + kConfig);
  CHECK(result.exit_code == 0);
}

TEST_CASE("aggregate: output matches independently recomputed percentiles") {
  const auto csv = golden_fixture_csv();
  const auto result = run_cli("aggregate -c " + kConfig + " " + csv.string());
  REQUIRE(result.exit_code == 0);

  // Recompute each aggregate with the sort-and-index oracle.
  const auto parsed =
      parse_per_test(parse_csv(slurp(csv)), canonical_per_test_adapter());
  REQUIRE(parsed.rejects.empty());

  const CsvTable table = parse_csv(result.out);
  REQUIRE(table.header ==
          parse_csv(format_aggregate_csv_header()).header);
  CHECK(table.rows.size() == 3 * 4);  // 3 datasets x 4 metrics
  for (const auto& row : table.rows) {
    const std::string& dataset = row[1];
    const auto metric = metric_from_token(row[2]);
    REQUIRE(metric.has_value());
    std::vector<double> values;
    for (const auto& r : parsed.records) {
      if (r.dataset_id == dataset && r.metric == *metric) values.push_back(r.value);
    }
    REQUIRE(!values.empty());
    std::sort(values.begin(), values.end());
    const double expected =
        values[tail_rank(values.size(), 95.0, metric_direction(*metric)) - 1];
    CHECK(std::stod(row[4]) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(row[6] == "40");  // sample count
  }
}

TEST_CASE("aggregate: deterministic bytes and ordered keys") {
  const auto csv = golden_fixture_csv();
  const auto a = run_cli("aggregate -c " + kConfig + " " + csv.string());
  const auto b = run_cli("aggregate -c " + kConfig + " " + csv.string());
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  const CsvTable table = parse_csv(a.out);
  std::vector<std::string> keys;
  for (const auto& row : table.rows) keys.push_back(row[0] + "|" + row[1] + "|" + row[2]);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("aggregate: empty window exits 1") {
  const auto csv = golden_fixture_csv();
  const auto result =
      run_cli("aggregate -c " + kConfig + " " + csv.string() +
              " --window 1999-01-01T00:00:00Z..1999-01-02T00:00:00Z");
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("no data") != std::string::npos);
}

TEST_CASE("score: golden fixture reports 0.950980") {
  const auto result =
      run_cli("score -c " + kConfig + " " + golden_fixture_csv().string());
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("\"s_iqb\": 0.950980") != std::string::npos);
  CHECK(result.out.find("\"region_id\": \"r1\"") != std::string::npos);
  CHECK(result.out.find("\"tool_version\"") != std::string::npos);
}

TEST_CASE("score: minimum level never scores below high") {
  const auto csv = golden_fixture_csv().string();
  const auto high = run_cli("score -c " + kConfig + " " + csv + " --level high");
  const auto min = run_cli("score -c " + kConfig + " " + csv + " --level min");
  REQUIRE(high.exit_code == 0);
  REQUIRE(min.exit_code == 0);
  CHECK(extract_s_iqb(min.out) >= extract_s_iqb(high.out));
  CHECK(min.out.find("\"quality_level\": \"minimum\"") != std::string::npos);
}

TEST_CASE("score: byte-identical reruns aside from the manifest timestamp") {
  const auto csv = golden_fixture_csv().string();
  const auto a = run_cli("score -c " + kConfig + " " + csv);
  const auto b = run_cli("score -c " + kConfig + " " + csv);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out != b.out);  // started_at differs
  CHECK(strip_started_at(a.out) == strip_started_at(b.out));
}

TEST_CASE("score: unknown region exits 1") {
  const auto result = run_cli("score -c " + kConfig + " " +
                              golden_fixture_csv().string() + " --region nowhere");
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("insufficient data") != std::string::npos);
}

TEST_CASE("score: csv format flattens to one row per cell") {
  const auto result = run_cli("score -c " + kConfig + " " +
                              golden_fixture_csv().string() + " --format csv");
  REQUIRE(result.exit_code == 0);
  const CsvTable table = parse_csv(result.out);
  CHECK(table.rows.size() == 6 * 4 * 3);  // use cases x metrics x datasets
  CHECK(table.header.front() == "region_id");
  CHECK(table.header.back() == "s_iqb");
}

TEST_CASE("explain: footer restates the composite and rows sort by contribution") {
  const auto csv = golden_fixture_csv().string();
  const auto result = run_cli("explain -c " + kConfig + " " + csv + " --region r1");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("s_iqb = 0.950980") != std::string::npos);
  CHECK(result.out.find("(sum of satisfied contributions = 0.950980)") !=
        std::string::npos);

  const auto gaming = run_cli("explain -c " + kConfig + " " + csv +
                              " --region r1 --use-case gaming");
  REQUIRE(gaming.exit_code == 0);
  // Gaming latency cells show score 0 and zero realized contribution.
  std::istringstream in(gaming.out);
  std::string line;
  int latency_rows = 0;
  int other_rows = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string use_case, metric, dataset, weight, score, contribution;
    if (!(fields >> use_case >> metric >> dataset >> weight >> score >> contribution)) {
      continue;
    }
    if (use_case != "gaming") continue;
    if (metric == "latency") {
      ++latency_rows;
      CHECK(score == "0");
      CHECK(contribution == "0.000000");
    } else {
      ++other_rows;
      CHECK(score == "1");
    }
  }
  CHECK(latency_rows == 3);
  CHECK(other_rows == 9);
}

TEST_CASE("explain: unknown use case exits 2, missing region data exits 1") {
  const auto csv = golden_fixture_csv().string();
  CHECK(run_cli("explain -c " + kConfig + " " + csv +
                " --region r1 --use-case quilting")
            .exit_code == 2);
  CHECK(run_cli("explain -c " + kConfig + " " + csv + " --region mars").exit_code == 1);
}

TEST_CASE("score: sample data in the repository scores both regions") {
  const std::string data_dir = std::string(IQB_CONFIGS_DIR) + "/../data";
  const auto result = run_cli("score -c " + kConfig + " " + data_dir +
                              "/sample_measurements.csv " + data_dir +
                              "/sample_ookla_aggregates.csv");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("\"region_id\": \"metro-east\"") != std::string::npos);
  CHECK(result.out.find("\"region_id\": \"rural-west\"") != std::string::npos);
  // Six-sample cells are below the minimum sample size.
  CHECK(result.out.find("low_sample_count") != std::string::npos);
}

TEST_SUITE_END();
