// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. The CLI binary path is taken from
// argv[1] (or the QCE_CLI environment variable) for the determinism check.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "qce/verify.hpp"

namespace {

using namespace qce;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

bool report_line(int index, const char* title, const Criterion& c, double elapsed) {
  std::printf("%s criterion %d (%s): %.1f s%s%s\n", c.pass ? "PASS" : "FAIL", index, title,
              elapsed, c.detail.empty() ? "" : " -- ", c.detail.c_str());
  std::fflush(stdout);
  return c.pass;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::string(buf);
}

// ---- criterion 1: two-Bell-pair and GHZ values across three regroupings ----
Criterion criterion_example_a(double* elapsed) {
  const auto t0 = Clock::now();
  Criterion c;
  const DensityMatrix two_bell = density_from_pure(two_bell_state());
  const DensityMatrix ghz4 = density_from_pure(ghz_state(4));
  const std::vector<std::vector<std::size_t>> paired = {{0, 2}, {1, 3}};
  const std::vector<std::vector<std::size_t>> ab_cut = {{0, 1}, {2, 3}};

  struct Case {
    const char* name;
    DensityMatrix rho;
    double expect;
  };
  const std::vector<Case> cases = {
      {"2bell four parts", two_bell, 2.0},
      {"2bell paired", regroup(two_bell, paired), 0.0},
      {"2bell ab", regroup(two_bell, ab_cut), 2.0},
      {"ghz4 four parts", ghz4, 1.0},
      {"ghz4 paired", regroup(ghz4, paired), 1.0},
      {"ghz4 ab", regroup(ghz4, ab_cut), 1.0},
  };
  std::uint64_t task = 0;
  for (const Case& k : cases) {
    OptimizerConfig cfg;  // default restarts
    cfg.seed = 1000 * (++task);
    const double got = qc_entropy(k.rho, cfg).value;
    c.require(std::abs(got - k.expect) <= 1e-3,
              std::string(k.name) + " got " + fmt(got) + " want " + fmt(k.expect));
  }
  *elapsed = seconds_since(t0);
  c.require(*elapsed < 60.0, "runtime " + fmt(*elapsed) + " s exceeds 60 s");
  return c;
}

// ---- criterion 2: the half(|00>+|1+>) mixture ----
Criterion criterion_example_b(double* elapsed) {
  const auto t0 = Clock::now();
  Criterion c;
  const DensityMatrix exb = example_b_state();
  OptimizerConfig cfg;
  cfg.seed = 21;
  const double sqc = qc_entropy(exb, cfg).value;
  c.require(std::abs(sqc - 0.50) <= 0.01, "sqc " + fmt(sqc) + " want 0.50 +- 0.01");

  const double oracle = brute_force_qc(exb, 10000, 22);
  c.require(std::abs(sqc - oracle) <= 0.01,
            "oracle " + fmt(oracle) + " vs optimizer " + fmt(sqc));

  const double upper = qc_upper_bound(exb);
  c.require(std::abs(upper - 0.60088) <= 1e-4, "upper bound " + fmt(upper) + " want 0.60088");

  *elapsed = seconds_since(t0);
  c.require(*elapsed < 30.0, "runtime " + fmt(*elapsed) + " s exceeds 30 s");
  return c;
}

// ---- criterion 3: strict mutual-information inequality on the same state ----
Criterion criterion_gap_strict(double* elapsed) {
  const auto t0 = Clock::now();
  Criterion c;
  const DensityMatrix exb = example_b_state();
  OptimizerConfig cfg;
  cfg.seed = 31;
  const double sqc = qc_entropy(exb, cfg).value;
  const double iqm = quantum_mutual_information(exb);
  OptimizerConfig icl_cfg;
  icl_cfg.seed = 32;
  const double icl = classical_mutual_information(exb, icl_cfg);
  const double slack = sqc - (iqm - icl);
  c.require(slack > 0.01, "sqc - (iqm - icl) = " + fmt(slack) + " must exceed 0.01");
  *elapsed = seconds_since(t0);
  c.require(*elapsed < 60.0, "runtime " + fmt(*elapsed) + " s exceeds 60 s");
  return c;
}

// ---- criterion 4: randomized property suite ----
Criterion criterion_properties(double* elapsed) {
  const auto t0 = Clock::now();
  Criterion c;
  verify::PropertySuiteConfig pc;  // 50 states, 100 cgs, 10 twirls, 20 product states
  pc.seed = 1;
  const std::vector<verify::Check> checks = verify::properties_suite(pc);
  for (const verify::Check& chk : checks) {
    std::printf("  %s %s: %s\n", chk.pass ? "ok  " : "FAIL", chk.name.c_str(),
                chk.detail.c_str());
    c.require(chk.pass, chk.name);
  }
  *elapsed = seconds_since(t0);
  c.require(*elapsed < 900.0, "runtime " + fmt(*elapsed) + " s exceeds 15 min");
  return c;
}

// ---- criterion 5: analytic fast paths against the search ----
Criterion criterion_fast_paths(double* elapsed) {
  const auto t0 = Clock::now();
  Criterion c;
  verify::FastPathConfig fc;  // 20 pure states, 10 sigma matrices
  fc.seed = 2;
  const std::vector<verify::Check> checks = verify::fast_path_suite(fc);
  for (const verify::Check& chk : checks) {
    std::printf("  %s %s: %s\n", chk.pass ? "ok  " : "FAIL", chk.name.c_str(),
                chk.detail.c_str());
    c.require(chk.pass, chk.name);
  }
  *elapsed = seconds_since(t0);
  c.require(*elapsed < 300.0, "runtime " + fmt(*elapsed) + " s exceeds 5 min");
  return c;
}

// ---- criterion 6: byte-identical numeric report fields for a fixed seed ----
std::string run_cli(const std::string& cli, const std::string& args, int* exit_code) {
  const std::string cmd = cli + " " + args + " 2>/dev/null";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    *exit_code = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

Criterion criterion_determinism(const std::string& cli, double* elapsed) {
  const auto t0 = Clock::now();
  Criterion c;
  if (cli.empty()) {
    c.require(false, "CLI path missing (pass as argv[1] or set QCE_CLI)");
    *elapsed = seconds_since(t0);
    return c;
  }
  const std::vector<std::string> commands = {
      "compute --state named:example_b --seed 11",
      "compute --state named:bell --seed 4 --oracle",
      "compute --state named:ghz:3 --seed 9",
      "bounds --state named:two_bell",
  };
  for (const std::string& args : commands) {
    int code_a = 0, code_b = 0;
    const std::string a = run_cli(cli, args, &code_a);
    const std::string b = run_cli(cli, args, &code_b);
    c.require(code_a == 0 && code_b == 0, "command failed: " + args);
    if (code_a != 0 || code_b != 0) continue;
    nlohmann::json ja = nlohmann::json::parse(a, nullptr, false);
    nlohmann::json jb = nlohmann::json::parse(b, nullptr, false);
    if (ja.is_discarded() || jb.is_discarded()) {
      c.require(false, "unparseable output: " + args);
      continue;
    }
    ja.erase("runtime_seconds");
    jb.erase("runtime_seconds");
    c.require(ja.dump() == jb.dump(), "outputs differ for: " + args);
  }
  *elapsed = seconds_since(t0);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  if (argc > 1) cli = argv[1];
  if (cli.empty() && std::getenv("QCE_CLI") != nullptr) cli = std::getenv("QCE_CLI");

  bool all_pass = true;
  double elapsed = 0.0;

  Criterion c1 = criterion_example_a(&elapsed);
  all_pass &= report_line(1, "two-Bell and GHZ table", c1, elapsed);

  Criterion c2 = criterion_example_b(&elapsed);
  all_pass &= report_line(2, "separable mixture value and bound", c2, elapsed);

  Criterion c3 = criterion_gap_strict(&elapsed);
  all_pass &= report_line(3, "strict mutual-information inequality", c3, elapsed);

  Criterion c4 = criterion_properties(&elapsed);
  all_pass &= report_line(4, "randomized property suite", c4, elapsed);

  Criterion c5 = criterion_fast_paths(&elapsed);
  all_pass &= report_line(5, "analytic fast paths", c5, elapsed);

  Criterion c6 = criterion_determinism(cli, &elapsed);
  all_pass &= report_line(6, "seeded determinism", c6, elapsed);

  std::printf("%s\n", all_pass ? "acceptance: all criteria passed"
                               : "acceptance: criteria failed");
  return all_pass ? 0 : 1;
}
