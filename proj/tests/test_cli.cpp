#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "opdsim/cli.hpp"
#include "opdsim/io.hpp"

using namespace opdsim;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("opdsim_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("generate requires a seed") {
  const auto dir = scratch("gen_noseed");
  const auto r = cli({"generate", "--out", (dir / "d.json").string()});
  CHECK(r.code == kExitUsage);
  CHECK_FALSE(fs::exists(dir / "d.json"));
}

TEST_CASE("generate is reproducible") {
  const auto dir = scratch("gen");
  const auto a = cli({"generate", "--seed", "42", "--out", (dir / "a.json").string()});
  const auto b = cli({"generate", "--seed", "42", "--out", (dir / "b.json").string()});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("critical=13 high=36 medium=158 low=161") != std::string::npos);
  CHECK(read_text_file(dir / "a.json") == read_text_file(dir / "b.json"));
}

TEST_CASE("run fcfs reports no drift") {
  const auto r = cli({"run", "--strategy", "fcfs", "--seed", "3"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["strategy"] == "fcfs");
  CHECK(j["drift_event_count"] == 0);
}

TEST_CASE("agentic without memory and drift keeps the face-value composition") {
  const auto r = cli({"run", "--strategy", "agentic", "--no-memory", "--no-drift", "--seed", "9"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  const auto& c = j["final_composition"];
  CHECK(c["critical"] == 13);
  CHECK(c["high"] == 36);
  CHECK(c["medium"] == 158);
  CHECK(c["low"] == 161);
}

TEST_CASE("ablation flags on a baseline strategy only warn") {
  const auto r = cli({"run", "--strategy", "rule-based", "--no-drift", "--seed", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("run writes trace and escalation logs") {
  const auto dir = scratch("trace");
  const auto r = cli({"run", "--seed", "2", "--out", (dir / "m.json").string(), "--trace",
                      (dir / "t.csv").string(), "--escalations", (dir / "e.csv").string()});
  REQUIRE(r.code == kExitOk);
  const std::string trace = read_text_file(dir / "t.csv");
  CHECK(trace.starts_with("time,kind,patient,physician\n"));
  CHECK(trace.find("ConsultStart") != std::string::npos);
  CHECK(read_text_file(dir / "e.csv").starts_with("time,patient_id,from,to,cause\n"));
  const auto again = cli({"run", "--seed", "2", "--out", (dir / "m2.json").string(), "--trace",
                          (dir / "t2.csv").string()});
  REQUIRE(again.code == kExitOk);
  CHECK(read_text_file(dir / "t2.csv") == trace);
  CHECK(read_text_file(dir / "m2.json") == read_text_file(dir / "m.json"));
}

TEST_CASE("invalid inputs map to exit codes") {
  CHECK(cli({"run", "--strategy", "random"}).code == kExitValidation);
  CHECK(cli({"run", "--reg-desks", "0"}).code == kExitValidation);
  CHECK(cli({"run", "--kappa", "-1"}).code == kExitValidation);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"run", "--config", "/nonexistent/config.json"}).code == kExitUsage);

  const auto dir = scratch("badcfg");
  write_text_file_atomic(dir / "c.json", R"({"colour": "blue"})");
  CHECK(cli({"run", "--config", (dir / "c.json").string()}).code == kExitValidation);
  write_text_file_atomic(dir / "bad.json", "{");
  CHECK(cli({"run", "--config", (dir / "bad.json").string()}).code == kExitValidation);
}

TEST_CASE("config file values apply and flags override them") {
  const auto dir = scratch("cfg");
  write_text_file_atomic(dir / "c.json", R"({"strategy": "fcfs", "seed": 4})");
  const auto r = cli({"run", "--config", (dir / "c.json").string()});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["strategy"] == "fcfs");
  CHECK(j["seed"] == 4);
  const auto o = cli({"run", "--config", (dir / "c.json").string(), "--seed", "5"});
  REQUIRE(o.code == kExitOk);
  CHECK(nlohmann::json::parse(o.out)["seed"] == 5);
}

TEST_CASE("every subcommand has help") {
  for (std::string sub : {"generate", "run", "experiment", "ablation", "compare", "calibrate"}) {
    const auto r = cli({sub, "--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("compare accepts matching experiments and refuses mismatched ones") {
  const auto dir = scratch("compare");
  REQUIRE(cli({"experiment", "--runs", "3", "--base-seed", "1", "--out-dir", (dir / "e1").string()}).code ==
          kExitOk);
  REQUIRE(cli({"experiment", "--strategy", "agentic", "--runs", "3", "--base-seed", "50", "--out-dir",
               (dir / "e2").string()})
              .code == kExitOk);
  CHECK(fs::exists(dir / "e1" / "table_performance.csv"));
  CHECK(read_text_file(dir / "e1" / "table_performance.csv").starts_with("# manifest_hash="));

  const auto ok = cli({"compare", (dir / "e1" / "agentic").string(), (dir / "e1" / "fcfs").string(), "--metric",
                       "avg_wait"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("avg_wait") != std::string::npos);

  const auto bad = cli({"compare", (dir / "e1" / "agentic").string(), (dir / "e2" / "agentic").string()});
  CHECK(bad.code == kExitValidation);

  // Tampered runs are detected.
  write_text_file_atomic(dir / "e1" / "fcfs" / "runs.jsonl", "");
  CHECK(cli({"compare", (dir / "e1" / "agentic").string(), (dir / "e1" / "fcfs").string()}).code ==
        kExitValidation);
  CHECK(cli({"compare", (dir / "missing").string(), (dir / "e1" / "fcfs").string()}).code == kExitIo);
}

TEST_CASE("calibrate writes the grid and a config fragment") {
  const auto dir = scratch("calibrate");
  const auto r = cli({"calibrate", "--sweep-kappa", "1", "--sweep-p-hist", "0", "--runs", "2", "--out-dir",
                      dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("history_multiplier=1") != std::string::npos);
  const std::string csv = read_text_file(dir / "calibration.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  const auto frag = nlohmann::json::parse(read_text_file(dir / "calibration.json"));
  CHECK(frag["drift"]["p_history_escalation"] == 0.0);
  CHECK(cli({"calibrate", "--sweep-kappa", "x", "--out-dir", dir.string()}).code == kExitValidation);
}

TEST_CASE("installed binary reports usage errors through its exit status") {
  const std::string bin = OPDSIM_BINARY;
  const int status = std::system((bin + " generate --out /dev/null > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == kExitUsage);
  const int ok = std::system((bin + " --version > /dev/null").c_str());
  REQUIRE(WIFEXITED(ok));
  CHECK(WEXITSTATUS(ok) == 0);
}
