// Command-line front end: compute correlation entropies of quantum states,
// evaluate bounds, emit machine-readable reports, and run the verification
// suites. Exit codes: 0 ok, 1 verification failure, 2 parse/usage error,
// 3 invalid state, 4 internal consistency violation.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qce/io.hpp"
#include "qce/verify.hpp"

namespace {

using namespace qce;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitParseError = 2;
constexpr int kExitInvalidState = 3;
constexpr int kExitInternalError = 4;

struct ComputeOptions {
  std::string state;
  std::string partition;
  std::string cg_path;
  std::uint64_t seed = 0;
  std::size_t restarts = 32;
  std::string log_base = "2";
  std::string format = "json";
  bool oracle = false;
  std::string out_path;  // report subcommand only
};

std::vector<std::size_t> parse_partition_flag(const std::string& text) {
  std::vector<std::size_t> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || end == nullptr || *end != '\0' || v < 2)
      throw parse_error("--partition: expected comma-separated integers >= 2");
    dims.push_back(static_cast<std::size_t>(v));
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return dims;
}

double to_base(double bits, LogBase base) {
  return base == LogBase::two ? bits : bits * std::log(2.0);
}

LogBase parse_log_base(const std::string& text) {
  if (text == "2") return LogBase::two;
  if (text == "e") return LogBase::e;
  throw parse_error("--log-base: expected 2 or e");
}

ParsedState resolve_state(const ComputeOptions& opt) {
  ParsedState parsed = load_state_argument(opt.state);
  if (!opt.partition.empty()) {
    const std::vector<std::size_t> dims = parse_partition_flag(opt.partition);
    parsed.rho = parsed.rho.repartitioned(PartitionSpec(dims));
    parsed.echo["dims"] = dims;
  }
  return parsed;
}

std::string subset_key(std::span<const std::size_t> keep) {
  std::string key;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (i) key += ",";
    key += std::to_string(keep[i]);
  }
  return key;
}

std::map<std::string, double> all_lower_bounds(const DensityMatrix& rho, LogBase base) {
  std::map<std::string, double> lower;
  const std::size_t n = rho.partition().subsystem_count();
  for (std::size_t mask = 1; n >= 2 && mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < n; ++s)
      if (mask & (std::size_t{1} << s)) keep.push_back(s);
    lower[subset_key(keep)] = round9(to_base(qc_lower_bound(rho, keep), base));
  }
  return lower;
}

EntropyReport run_compute(const ComputeOptions& opt, json* extra) {
  const auto t0 = std::chrono::steady_clock::now();
  const LogBase base = parse_log_base(opt.log_base);
  const ParsedState parsed = resolve_state(opt);
  const DensityMatrix& rho = parsed.rho;

  OptimizerConfig cfg;
  cfg.seed = opt.seed;
  cfg.restarts = opt.restarts;

  const QcEntropyResult qc = qc_entropy(rho, cfg);
  const ClassicalityVerdict verdict = is_classically_correlated(rho, qc);

  EntropyReport r;
  r.state_echo = parsed.echo;
  r.descriptor = parsed.descriptor;
  r.partition.assign(rho.dims().begin(), rho.dims().end());
  r.svn = round9(to_base(qc.von_neumann, base));
  r.sqc = round9(to_base(qc.value, base));
  r.lower_bounds = all_lower_bounds(rho, base);
  r.upper_bound = round9(to_base(qc_upper_bound(rho), base));
  r.bipartite = rho.partition().subsystem_count() == 2;
  if (r.bipartite) {
    OptimizerConfig icl_cfg = cfg;
    icl_cfg.seed = cfg.seed + 1;
    const double iqm = quantum_mutual_information(rho);
    const double icl = classical_mutual_information(rho, icl_cfg);
    r.iqm = round9(to_base(iqm, base));
    r.icl = round9(to_base(icl, base));
    r.gap = round9(to_base(iqm - icl, base));
  }
  r.classical_verdict = verdict.classical;
  r.classical_threshold = round9(to_base(1e-6, base));
  r.seed = opt.seed;
  r.restarts = opt.restarts;
  for (double v : qc.optimization.best_per_restart)
    r.best_per_restart.push_back(round9(to_base(v, base)));
  r.converged = qc.optimization.converged;
  if (opt.oracle && rho.dim() <= 16) {
    r.has_oracle = true;
    r.oracle_samples = 10000;
    r.oracle_value = round9(to_base(brute_force_qc(rho, r.oracle_samples, opt.seed), base));
    r.oracle_delta = round9(r.sqc - r.oracle_value);
  }
  if (extra != nullptr && !opt.cg_path.empty()) {
    std::ifstream in(opt.cg_path);
    if (!in) throw parse_error("cg spec: cannot open '" + opt.cg_path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw parse_error("cg spec '" + opt.cg_path + "': " + e.what());
    }
    const ParsedCoarseGraining cg = parse_cg_spec(doc);
    if (cg.cg.dim != rho.dim())
      throw invalid_state_error("cg spec: dimension does not match the state");
    (*extra)["s_cg_bits"] = round9(observational_entropy(rho, cg.cg, base));
  }
  const auto t1 = std::chrono::steady_clock::now();
  r.runtime_seconds = round9(std::chrono::duration<double>(t1 - t0).count());
  return r;
}

void emit_report(const EntropyReport& r, const json& extra, const std::string& format,
                 std::ostream& os) {
  if (format == "csv") {
    os << csv_header() << "\n" << csv_row(r) << "\n";
    return;
  }
  json j = report_to_json(r);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  os << j.dump(2) << "\n";
}

int cmd_compute(const ComputeOptions& opt) {
  json extra = json::object();
  const EntropyReport r = run_compute(opt, &extra);
  emit_report(r, extra, opt.format, std::cout);
  return kExitOk;
}

int cmd_bounds(const ComputeOptions& opt) {
  const LogBase base = parse_log_base(opt.log_base);
  const ParsedState parsed = resolve_state(opt);
  const std::map<std::string, double> lower = all_lower_bounds(parsed.rho, base);
  const double upper = round9(to_base(qc_upper_bound(parsed.rho), base));
  if (opt.format == "csv") {
    std::cout << "subset,value_bits\n";
    for (const auto& [k, v] : lower) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.9g", v);
      std::cout << "\"lower " << k << "\"," << buf << "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", upper);
    std::cout << "upper," << buf << "\n";
    return kExitOk;
  }
  json j;
  j["state"] = parsed.echo;
  j["partition"] = std::vector<std::size_t>(parsed.rho.dims().begin(), parsed.rho.dims().end());
  j["svn_bits"] = round9(to_base(von_neumann_entropy(parsed.rho), base));
  j["bounds"] = {{"lower", lower}, {"upper", upper}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_report(const ComputeOptions& opt) {
  json extra = json::object();
  const EntropyReport r = run_compute(opt, &extra);
  std::ofstream out(opt.out_path);
  if (!out) throw parse_error("report: cannot open output path '" + opt.out_path + "'");
  emit_report(r, extra, opt.format, out);
  out.flush();
  if (!out) throw parse_error("report: write failed for '" + opt.out_path + "'");
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t states,
               std::size_t restarts) {
  OptimizerConfig base;
  base.seed = seed;
  base.restarts = restarts;
  std::vector<verify::Check> checks;
  const bool all = suite == "all";
  if (all || suite == "paper-examples") {
    const auto c = verify::paper_examples_suite(base);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  if (all || suite == "properties") {
    verify::PropertySuiteConfig pc;
    pc.seed = seed;
    pc.opt = base;
    if (states > 0) pc.states = states;
    const auto c = verify::properties_suite(pc);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  if (all || suite == "oracle") {
    verify::OracleSuiteConfig oc;
    oc.seed = seed;
    oc.opt = base;
    const auto c = verify::oracle_suite(oc);
    checks.insert(checks.end(), c.begin(), c.end());
  }
  if (checks.empty())
    throw parse_error("verify: unknown suite '" + suite +
                      "' (expected paper-examples, properties, oracle, or all)");
  bool ok = true;
  for (const verify::Check& c : checks) {
    std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    ok = ok && c.pass;
  }
  std::printf("%s\n", ok ? "all checks passed" : "verification failed");
  return ok ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum correlation entropy toolkit"};
  app.require_subcommand(1);

  ComputeOptions opt;
  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  std::size_t verify_states = 0;
  std::size_t verify_restarts = 32;

  auto add_state_flags = [&](CLI::App* sub, bool with_search) {
    sub->add_option("--state", opt.state, "state spec path or named:<name>")->required();
    sub->add_option("--partition", opt.partition, "comma-separated dims overriding the spec");
    sub->add_option("--log-base", opt.log_base, "2 or e")->check(CLI::IsMember({"2", "e"}));
    sub->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    if (with_search) {
      sub->add_option("--seed", opt.seed, "optimizer seed (default 0)");
      sub->add_option("--restarts", opt.restarts, "optimizer restarts (default 32)");
      sub->add_flag("--oracle", opt.oracle, "also run the brute-force oracle (dim <= 16)");
      sub->add_option("--cg", opt.cg_path, "coarse-graining spec; adds its entropy to the report");
    }
  };

  CLI::App* compute = app.add_subcommand("compute", "entropy report for a state");
  add_state_flags(compute, true);
  CLI::App* bounds = app.add_subcommand("bounds", "marginal-entropy bounds, no search");
  add_state_flags(bounds, false);
  CLI::App* report = app.add_subcommand("report", "write an entropy report to a file");
  add_state_flags(report, true);
  report->add_option("--out", opt.out_path, "output file path")->required();
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the verification suites");
  verify_cmd->add_option("--suite", suite, "paper-examples, properties, oracle, or all");
  verify_cmd->add_option("--seed", verify_seed, "ensemble seed (default 1)");
  verify_cmd->add_option("--states", verify_states, "property-suite ensemble size override");
  verify_cmd->add_option("--restarts", verify_restarts, "optimizer restarts (default 32)");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(compute)) return cmd_compute(opt);
    if (app.got_subcommand(bounds)) return cmd_bounds(opt);
    if (app.got_subcommand(report)) return cmd_report(opt);
    return cmd_verify(suite, verify_seed, verify_states, verify_restarts);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParseError;
  } catch (const qce::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParseError;
  } catch (const qce::invalid_state_error& e) {
    std::fprintf(stderr, "invalid state: %s\n", e.what());
    return kExitInvalidState;
  } catch (const qce::internal_error& e) {
    std::fprintf(stderr, "internal consistency violation: %s\n", e.what());
    return kExitInternalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternalError;
  }
}
