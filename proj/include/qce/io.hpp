#pragma once

#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qce/coarse_graining.hpp"
#include "qce/optimize.hpp"
#include "qce/states.hpp"

namespace qce {

using nlohmann::json;

/// Round to 9 significant decimal digits. Reports store already-rounded
/// numbers so printing, parsing and re-printing them is byte-stable.
inline double round9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

namespace detail {

inline cplx parse_complex_entry(const json& j, const std::string& field, std::size_t index) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw parse_error("state spec: " + field + "[" + std::to_string(index) +
                      "] must be a [re, im] pair");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

inline ComplexMatrix parse_matrix(const json& j, std::size_t rows, std::size_t cols,
                                  const std::string& field) {
  if (!j.is_array() || j.size() != rows * cols)
    throw parse_error("spec: " + field + " must hold " + std::to_string(rows * cols) +
                      " [re, im] entries (row-major)");
  std::vector<cplx> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = parse_complex_entry(j[k], field, k);
  return ComplexMatrix(rows, cols, std::move(entries));
}

inline json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (const cplx& z : m.entries()) out.push_back({z.real(), z.imag()});
  return out;
}

inline std::vector<std::size_t> parse_dims(const json& j) {
  if (!j.is_array() || j.empty()) throw parse_error("spec: dims must be a nonempty integer list");
  std::vector<std::size_t> dims;
  for (const json& d : j) {
    if (!d.is_number_integer() || d.get<long long>() < 2)
      throw parse_error("spec: dims entries must be integers >= 2");
    dims.push_back(d.get<std::size_t>());
  }
  return dims;
}

}  // namespace detail

struct ParsedState {
  DensityMatrix rho;
  json echo;               // the resolved spec document
  std::string descriptor;  // short human/CSV-friendly tag
};

/// Build a named reference state. Accepted: "bell", "ghz:<n>", "two_bell",
/// "example_b".
inline DensityMatrix named_state(const std::string& name) {
  if (name == "bell") {
    const double r = 1.0 / std::sqrt(2.0);
    return density_from_pure(PureState({r, 0.0, 0.0, r}, PartitionSpec({2, 2}, {"A", "B"})));
  }
  if (name == "two_bell") return density_from_pure(two_bell_state());
  if (name == "example_b") return example_b_state();
  if (name.rfind("ghz:", 0) == 0) {
    const std::string arg = name.substr(4);
    char* end = nullptr;
    const long n = std::strtol(arg.c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || n < 2 || n > 20)
      throw parse_error("named state: bad qubit count in '" + name + "'");
    return density_from_pure(ghz_state(static_cast<std::size_t>(n)));
  }
  throw parse_error("named state: unknown name '" + name + "'");
}

/// Ingest a state spec document: `dims` plus exactly one of `pure`, `density`,
/// `classical`, `named`.
inline ParsedState parse_state_spec(const json& doc) {
  if (!doc.is_object()) throw parse_error("state spec: document must be a JSON object");
  int variants = 0;
  for (const char* key : {"pure", "density", "classical", "named"})
    if (doc.contains(key)) ++variants;
  if (variants != 1)
    throw parse_error("state spec: exactly one of pure/density/classical/named required");

  std::optional<std::vector<std::size_t>> dims;
  if (doc.contains("dims")) dims = detail::parse_dims(doc.at("dims"));

  if (doc.contains("named")) {
    if (!doc.at("named").is_string()) throw parse_error("state spec: named must be a string");
    const std::string name = doc.at("named").get<std::string>();
    DensityMatrix rho = named_state(name);
    if (dims) {
      if (detail::product(*dims) != rho.dim())
        throw invalid_state_error("state spec: dims do not multiply to the named state's dimension");
      rho = rho.repartitioned(PartitionSpec(*dims));
    }
    json echo = {{"named", name}};
    if (dims) echo["dims"] = *dims;
    return {std::move(rho), std::move(echo), "named:" + name};
  }

  if (!dims) throw parse_error("state spec: dims required");
  const std::size_t d = detail::product(*dims);

  if (doc.contains("pure")) {
    const json& amps_json = doc.at("pure");
    if (!amps_json.is_array() || amps_json.size() != d)
      throw parse_error("state spec: pure must hold " + std::to_string(d) + " amplitude pairs");
    std::vector<cplx> amps(d);
    for (std::size_t k = 0; k < d; ++k)
      amps[k] = detail::parse_complex_entry(amps_json[k], "pure", k);
    PureState psi(std::move(amps), PartitionSpec(*dims));
    json echo = {{"dims", *dims}, {"pure", amps_json}};
    return {density_from_pure(psi), std::move(echo), "pure[" + std::to_string(d) + "]"};
  }

  if (doc.contains("density")) {
    ComplexMatrix m = detail::parse_matrix(doc.at("density"), d, d, "density");
    json echo = {{"dims", *dims}, {"density", doc.at("density")}};
    return {DensityMatrix(std::move(m), PartitionSpec(*dims)), std::move(echo),
            "density[" + std::to_string(d) + "]"};
  }

  const json& cl = doc.at("classical");
  if (!cl.is_object() || !cl.contains("probs"))
    throw parse_error("state spec: classical must be an object with probs");
  const json& probs_json = cl.at("probs");
  if (!probs_json.is_array() || probs_json.size() != d)
    throw parse_error("state spec: classical.probs must hold " + std::to_string(d) + " entries");
  std::vector<double> probs;
  for (const json& p : probs_json) {
    if (!p.is_number()) throw parse_error("state spec: classical.probs entries must be numbers");
    probs.push_back(p.get<double>());
  }
  std::vector<ComplexMatrix> bases;
  if (cl.contains("bases")) {
    const json& bj = cl.at("bases");
    if (!bj.is_array() || bj.size() != dims->size())
      throw parse_error("state spec: classical.bases must hold one matrix per subsystem");
    for (std::size_t s = 0; s < dims->size(); ++s)
      bases.push_back(detail::parse_matrix(bj[s], (*dims)[s], (*dims)[s], "classical.bases"));
  } else {
    for (std::size_t s : *dims) bases.push_back(ComplexMatrix::identity(s));
  }
  json echo = {{"dims", *dims}, {"classical", cl}};
  return {classical_state(probs, bases), std::move(echo), "classical[" + std::to_string(d) + "]"};
}

/// Parse the CLI's --state argument: either `named:<name>` or a JSON file path.
inline ParsedState load_state_argument(const std::string& arg) {
  if (arg.rfind("named:", 0) == 0) {
    json doc = {{"named", arg.substr(6)}};
    return parse_state_spec(doc);
  }
  std::FILE* f = std::fopen(arg.c_str(), "rb");
  if (f == nullptr) throw parse_error("state spec: cannot open '" + arg + "'");
  std::string text;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
  std::fclose(f);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error("state spec '" + arg + "': " + e.what());
  }
  return parse_state_spec(doc);
}

struct ParsedCoarseGraining {
  CoarseGraining cg;
  std::optional<LocalBasisPoint> basis_point;  // set for the basis_point variant
};

/// Coarse-graining spec: `dims` plus either `basis_point` (one unitary per
/// subsystem) or `projectors` (explicit matrices on the full space).
inline ParsedCoarseGraining parse_cg_spec(const json& doc) {
  if (!doc.is_object() || !doc.contains("dims"))
    throw parse_error("cg spec: document must be an object with dims");
  const std::vector<std::size_t> dims = detail::parse_dims(doc.at("dims"));
  const std::size_t d = detail::product(dims);
  const bool has_point = doc.contains("basis_point");
  const bool has_proj = doc.contains("projectors");
  if (has_point == has_proj)
    throw parse_error("cg spec: exactly one of basis_point/projectors required");

  ParsedCoarseGraining out;
  if (has_point) {
    const json& bj = doc.at("basis_point");
    if (!bj.is_array() || bj.size() != dims.size())
      throw parse_error("cg spec: basis_point must hold one unitary per subsystem");
    LocalBasisPoint point;
    for (std::size_t s = 0; s < dims.size(); ++s)
      point.unitaries.push_back(detail::parse_matrix(bj[s], dims[s], dims[s], "basis_point"));
    point.check();
    out.cg = product_cg(from_basis_point(point));
    out.basis_point = std::move(point);
  } else {
    const json& pj = doc.at("projectors");
    if (!pj.is_array() || pj.empty()) throw parse_error("cg spec: projectors must be a nonempty list");
    out.cg.dim = d;
    for (std::size_t k = 0; k < pj.size(); ++k)
      out.cg.projectors.push_back(detail::parse_matrix(pj[k], d, d, "projectors"));
    const CoarseGrainingValidation v = validate(out.cg);
    if (!v.pass()) throw invalid_state_error("cg spec: projectors do not form a coarse-graining");
  }
  return out;
}

/// Everything one computation run reports. All numeric fields are rounded to
/// 9 significant digits on construction, so serialization is lossless and
/// byte-stable for a fixed seed.
struct EntropyReport {
  json state_echo;
  std::string descriptor;
  std::vector<std::size_t> partition;
  double svn = 0.0;
  double sqc = 0.0;
  std::map<std::string, double> lower_bounds;
  double upper_bound = 0.0;
  bool bipartite = false;
  double iqm = 0.0;
  double icl = 0.0;
  double gap = 0.0;
  bool classical_verdict = false;
  double classical_threshold = 1e-6;
  std::uint64_t seed = 0;
  std::size_t restarts = 0;
  std::vector<double> best_per_restart;
  bool converged = false;
  double runtime_seconds = 0.0;
  bool has_oracle = false;
  double oracle_value = 0.0;
  double oracle_delta = 0.0;
  std::size_t oracle_samples = 0;

  bool operator==(const EntropyReport& o) const {
    return state_echo == o.state_echo && descriptor == o.descriptor && partition == o.partition &&
           svn == o.svn && sqc == o.sqc && lower_bounds == o.lower_bounds &&
           upper_bound == o.upper_bound && bipartite == o.bipartite && iqm == o.iqm &&
           icl == o.icl && gap == o.gap && classical_verdict == o.classical_verdict &&
           classical_threshold == o.classical_threshold && seed == o.seed &&
           restarts == o.restarts && best_per_restart == o.best_per_restart &&
           converged == o.converged && runtime_seconds == o.runtime_seconds &&
           has_oracle == o.has_oracle && oracle_value == o.oracle_value &&
           oracle_delta == o.oracle_delta && oracle_samples == o.oracle_samples;
  }
};

/// Short CSV-friendly tag recoverable from the echoed spec document.
inline std::string descriptor_for_echo(const json& echo) {
  if (echo.contains("named")) return "named:" + echo.at("named").get<std::string>();
  std::size_t d = 1;
  if (echo.contains("dims"))
    for (const json& x : echo.at("dims")) d *= x.get<std::size_t>();
  for (const char* kind : {"pure", "density", "classical"})
    if (echo.contains(kind)) return std::string(kind) + "[" + std::to_string(d) + "]";
  return "state[" + std::to_string(d) + "]";
}

inline json report_to_json(const EntropyReport& r) {
  json j;
  j["state"] = r.state_echo;
  j["partition"] = r.partition;
  j["svn_bits"] = r.svn;
  j["sqc_bits"] = r.sqc;
  j["bounds"] = {{"lower", r.lower_bounds}, {"upper", r.upper_bound}};
  if (r.bipartite) j["mutual"] = {{"iqm", r.iqm}, {"icl", r.icl}, {"gap", r.gap}};
  j["classical"] = {{"verdict", r.classical_verdict}, {"threshold", r.classical_threshold}};
  j["optimizer"] = {{"seed", r.seed},
                    {"restarts", r.restarts},
                    {"best_per_restart", r.best_per_restart},
                    {"converged", r.converged}};
  j["runtime_seconds"] = r.runtime_seconds;
  if (r.has_oracle)
    j["oracle"] = {{"value", r.oracle_value},
                   {"delta", r.oracle_delta},
                   {"samples", r.oracle_samples}};
  return j;
}

inline EntropyReport report_from_json(const json& j) {
  EntropyReport r;
  try {
    r.state_echo = j.at("state");
    r.descriptor = descriptor_for_echo(r.state_echo);
    r.partition = j.at("partition").get<std::vector<std::size_t>>();
    r.svn = j.at("svn_bits").get<double>();
    r.sqc = j.at("sqc_bits").get<double>();
    r.lower_bounds = j.at("bounds").at("lower").get<std::map<std::string, double>>();
    r.upper_bound = j.at("bounds").at("upper").get<double>();
    r.bipartite = j.contains("mutual");
    if (r.bipartite) {
      r.iqm = j.at("mutual").at("iqm").get<double>();
      r.icl = j.at("mutual").at("icl").get<double>();
      r.gap = j.at("mutual").at("gap").get<double>();
    }
    r.classical_verdict = j.at("classical").at("verdict").get<bool>();
    r.classical_threshold = j.at("classical").at("threshold").get<double>();
    r.seed = j.at("optimizer").at("seed").get<std::uint64_t>();
    r.restarts = j.at("optimizer").at("restarts").get<std::size_t>();
    r.best_per_restart = j.at("optimizer").at("best_per_restart").get<std::vector<double>>();
    r.converged = j.at("optimizer").at("converged").get<bool>();
    r.runtime_seconds = j.at("runtime_seconds").get<double>();
    r.has_oracle = j.contains("oracle");
    if (r.has_oracle) {
      r.oracle_value = j.at("oracle").at("value").get<double>();
      r.oracle_delta = j.at("oracle").at("delta").get<double>();
      r.oracle_samples = j.at("oracle").at("samples").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw parse_error(std::string("report: ") + e.what());
  }
  return r;
}

inline std::string csv_header() {
  return "descriptor,partition,svn_bits,sqc_bits,bound_lower_max,bound_upper,iqm,icl,gap,"
         "classical_verdict,classical_threshold,seed,restarts,converged,runtime_seconds";
}

inline std::string csv_row(const EntropyReport& r) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  std::string part;
  for (std::size_t i = 0; i < r.partition.size(); ++i) {
    if (i) part += "x";
    part += std::to_string(r.partition[i]);
  }
  double lower_max = 0.0;
  for (const auto& [k, v] : r.lower_bounds) lower_max = std::max(lower_max, v);
  std::ostringstream os;
  os << r.descriptor << ',' << part << ',' << num(r.svn) << ',' << num(r.sqc) << ','
     << num(lower_max) << ',' << num(r.upper_bound) << ',';
  if (r.bipartite)
    os << num(r.iqm) << ',' << num(r.icl) << ',' << num(r.gap) << ',';
  else
    os << ",,,";
  os << (r.classical_verdict ? "true" : "false") << ',' << num(r.classical_threshold) << ','
     << r.seed << ',' << r.restarts << ',' << (r.converged ? "true" : "false") << ','
     << num(r.runtime_seconds);
  return os.str();
}

}  // namespace qce
