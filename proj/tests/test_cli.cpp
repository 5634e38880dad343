// End-to-end checks of the command-line tool. The binary path comes from the
// QCE_CLI environment variable (set by CTest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const char* cli = std::getenv("QCE_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "QCE_CLI must point at the built binary");
  const std::string cmd = std::string(cli) + " " + args + " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/qce_cli_test_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

nlohmann::json strip_runtime(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  j.erase("runtime_seconds");
  return j;
}

}  // namespace

TEST_CASE("compute on named states") {
  const RunResult r = run("compute --state named:bell --seed 3");
  REQUIRE_EQ(r.exit_code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK_LE(std::abs(j.at("sqc_bits").get<double>() - 1.0), 1e-6);
  CHECK_LE(std::abs(j.at("mutual").at("iqm").get<double>() - 2.0), 1e-9);
  CHECK_EQ(j.at("optimizer").at("restarts").get<int>(), 32);
  CHECK_EQ(j.at("classical").at("verdict").get<bool>(), false);
}

TEST_CASE("reports are seed-deterministic up to wall time") {
  const RunResult a = run("compute --state named:example_b --seed 7");
  const RunResult b = run("compute --state named:example_b --seed 7");
  REQUIRE_EQ(a.exit_code, 0);
  REQUIRE_EQ(b.exit_code, 0);
  CHECK_EQ(strip_runtime(a.output).dump(), strip_runtime(b.output).dump());
  const RunResult c = run("compute --state named:example_b --seed 8");
  REQUIRE_EQ(c.exit_code, 0);
  CHECK_NE(strip_runtime(a.output).at("optimizer").dump(),
           strip_runtime(c.output).at("optimizer").dump());
}

TEST_CASE("csv format") {
  const RunResult r = run("compute --state named:bell --format csv");
  REQUIRE_EQ(r.exit_code, 0);
  CHECK(r.output.rfind("descriptor,partition,svn_bits,sqc_bits,", 0) == 0);
  CHECK(r.output.find("named:bell,2x2,") != std::string::npos);
}

TEST_CASE("file specs and partition override") {
  const std::string path = write_temp(
      "classical.json", R"({"dims": [2, 2], "classical": {"probs": [0.5, 0.0, 0.0, 0.5]}})");
  const RunResult r = run("compute --state " + path + " --seed 1");
  REQUIRE_EQ(r.exit_code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK_LE(j.at("sqc_bits").get<double>(), 1e-6);
  CHECK_EQ(j.at("classical").at("verdict").get<bool>(), true);

  const RunResult merged = run("compute --state named:two_bell --partition 4,4 --seed 1");
  REQUIRE_EQ(merged.exit_code, 0);
  const nlohmann::json jm = nlohmann::json::parse(merged.output);
  CHECK_EQ(jm.at("partition").dump(), "[4,4]");
  CHECK_LE(std::abs(jm.at("sqc_bits").get<double>() - 2.0), 1e-3);
}

TEST_CASE("exit codes") {
  const std::string bad_json = write_temp("bad.json", "{ not json");
  CHECK_EQ(run("compute --state " + bad_json).exit_code, 2);
  CHECK_EQ(run("compute --state /does/not/exist.json").exit_code, 2);
  CHECK_EQ(run("compute").exit_code, 2);  // missing required flag

  const std::string bad_state = write_temp(
      "bad_state.json",
      R"({"dims": [2], "density": [[0.9, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]})");
  CHECK_EQ(run("compute --state " + bad_state).exit_code, 3);
}

TEST_CASE("bounds command") {
  const RunResult r = run("bounds --state named:example_b");
  REQUIRE_EQ(r.exit_code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK_LE(std::abs(j.at("bounds").at("upper").get<double>() - 0.60088), 1e-4);
  CHECK_EQ(j.at("bounds").at("lower").size(), 2);
}

TEST_CASE("report command writes files") {
  const std::string out = "/tmp/qce_cli_test_report.json";
  const RunResult r = run("report --state named:bell --seed 2 --out " + out);
  REQUIRE_EQ(r.exit_code, 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK_LE(std::abs(j.at("sqc_bits").get<double>() - 1.0), 1e-6);

  CHECK_EQ(run("report --state named:bell --out /no/such/dir/out.json").exit_code, 2);
}

TEST_CASE("coarse-graining flag adds the measured entropy") {
  const std::string cg = write_temp("cg.json", R"({
    "dims": [2, 2],
    "basis_point": [
      [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
      [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    ]})");
  const RunResult r = run("compute --state named:bell --cg " + cg);
  REQUIRE_EQ(r.exit_code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  CHECK_LE(std::abs(j.at("s_cg_bits").get<double>() - 1.0), 1e-9);
}

TEST_CASE("oracle flag appends the comparison") {
  const RunResult r = run("compute --state named:example_b --seed 5 --oracle");
  REQUIRE_EQ(r.exit_code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  REQUIRE(j.contains("oracle"));
  CHECK_LE(std::abs(j.at("oracle").at("value").get<double>() - 0.5), 0.01);
  CHECK_LE(std::abs(j.at("oracle").at("delta").get<double>()), 0.01);
}

TEST_CASE("log base e scales entropies") {
  const RunResult r2 = run("compute --state named:bell --seed 1");
  const RunResult re = run("compute --state named:bell --seed 1 --log-base e");
  REQUIRE_EQ(r2.exit_code, 0);
  REQUIRE_EQ(re.exit_code, 0);
  const double bits = nlohmann::json::parse(r2.output).at("sqc_bits").get<double>();
  const double nats = nlohmann::json::parse(re.output).at("sqc_bits").get<double>();
  CHECK_LE(std::abs(nats - bits * std::log(2.0)), 1e-8);
}

TEST_CASE("verify oracle suite") {
  const RunResult r = run("verify --suite oracle --seed 3");
  CHECK_EQ(r.exit_code, 0);
  CHECK(r.output.find("PASS oracle_agreement") != std::string::npos);
  CHECK(r.output.find("all checks passed") != std::string::npos);

  CHECK_EQ(run("verify --suite bogus").exit_code, 2);
}
