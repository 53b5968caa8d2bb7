#pragma once

// Run configuration, JSON/CSV serialization and the command implementations
// behind the sbtheta executable.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sbtheta/error.hpp"
#include "sbtheta/verification.hpp"

namespace sbtheta {

using json = nlohmann::json;

struct MuPointConfig {
  cplx z;
  int sheet = 1;
};

struct RunConfig {
  std::vector<cplx> branch_points;
  int g_sign = 1;
  std::optional<std::vector<Cut>> pairing;  // indices into the sorted branch points
  int n0 = 0;
  cplx alpha0 = 1.0;
  std::vector<MuPointConfig> mu_hat;
  int n_min = -5;
  int n_max = 5;
  double tol_quadrature = 1e-13;
  double tol_theta = 1e-15;
  Tolerances acceptance;
  std::uint64_t seed_riemann = 12345;
  std::uint64_t seed_verify = 2024;
  std::string format = "json";
  std::string output_path;
  json theta;  // optional {"tau": [[...]], "z": [[...]]} for theta-eval
  json raw;    // the parsed document, used for the provenance hash
};

/// Parses a configuration document; errors name the offending field path.
RunConfig parse_config(const json& doc);
/// Reads and parses a file; JSON syntax errors report line and column.
RunConfig load_config(const std::string& path);
json read_json_file(const std::string& path);

/// Applies --tol-acceptance: every 1e-6-class tolerance becomes x, tighter ones min(x, default).
void override_acceptance(Tolerances& tol, double x);

/// JSON text with every float printed using 17 significant digits.
std::string dump_json(const json& j, int indent = 2);
json to_json(cplx v);
cplx complex_from_json(const json& j, const std::string& path);

json report_to_json(const VerificationReport& r);
json provenance(const RunConfig& cfg, const CurveSpec& spec);
std::uint64_t fnv1a(const std::string& text);

void write_sequences_csv(std::ostream& os, const LatticeSolution& sol);

/// Sequences for `verify`: a solve output (JSON or CSV) or {"n_min", "alpha", "beta", ...}.
struct SequenceInput {
  LatticeSeq seq;
  std::optional<int> p;
  std::vector<cplx> constants;  // c_1, c_2, ...
  std::optional<cplx> g_top;
};
SequenceInput load_sequences(const std::string& path);

/// Exit codes: 0 pass, 1 verification failure, 2 input or guard error, 3 internal self-check.
int exit_code_for(ErrorCode code);

struct CommandOptions {
  std::string out_path;
  std::string format;
  std::optional<double> tol_acceptance;
  std::optional<std::uint64_t> seed;
  std::string sequences_path;
};

int cmd_curve_info(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_periods(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_theta_eval(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_solve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_genus0(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_verify(const std::optional<RunConfig>& cfg, const CommandOptions& opt, std::ostream& out);

}  // namespace sbtheta
