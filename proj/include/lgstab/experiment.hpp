#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lgstab/metrics.hpp"
#include "lgstab/scheme.hpp"

namespace lgstab {

/// Result of one (scheme, nu, N) run.
struct RunRecord {
  RunConfig config;
  double h = 0.0;
  double cp = 0.0;
  ErrorReport errors;
  RunSummary summary;
  double wall_seconds = 0.0;
  std::string error;  // empty on success
  std::string slope_flag = "na";
  std::optional<Field> final_u;
  std::optional<Field> final_p;
};

/// Runs one configuration and measures relative errors; failures are caught
/// and recorded in RunRecord::error.
RunRecord run_single(const RunConfig& config, const ProblemDef& problem, double cp,
                     bool keep_final_state = false);

struct ExperimentSpec {
  std::string case_name = "a";  // a | b | c | d | ex42 | custom
  std::vector<int> N_list{16, 23, 32, 45, 64};
  std::vector<Scheme> schemes;  // empty: case preset
  std::vector<double> nus;      // empty: case preset
  int k = 2;
  std::optional<double> dt;  // default h^2 (0.01 for ex42)
  std::optional<double> T;
  std::optional<double> cp;
  std::optional<double> delta0;
  CompositeMode composite = CompositeMode::exact;
  SolverKind solver = SolverKind::direct;
  bool strict = false;
  bool timing = false;  // write measured wall_seconds (otherwise 0)
  bool verbose = false;
  int jobs = 1;
  std::filesystem::path out_dir = "out";
};

/// Reduced mesh list for quick runs; keeps dt = h^2.
inline const std::vector<int> kCiMeshList{8, 11, 16, 23};

/// Applies the case preset (schemes, nu list, Cp, problem parameters) to the
/// unset fields.
ExperimentSpec resolve_preset(ExperimentSpec spec);

struct CaseResult {
  std::vector<RunRecord> rows;
  std::filesystem::path csv;
  std::filesystem::path svg;
};

inline constexpr const char* kCsvHeader =
    "case,scheme,k,N,h,dt,nu,delta0,Cp,E_linfL2_u,E_l2H10_u,E_l2L2_p,slope_flag,wall_seconds";

/// Runs all (scheme, nu, N) combinations, writes <out>/case_<name>.csv and
/// <out>/case_<name>.svg (plus field dumps and a summary for ex42).
CaseResult run_case(const ExperimentSpec& spec);

std::string csv_row(const std::string& case_name, const RunRecord& r);
std::string render_svg(const std::string& title, const std::vector<RunRecord>& rows);

/// Samples u1, u2, p on a uniform (n x n) grid: lines "x y u1 u2 p".
void write_field_dump(const std::filesystem::path& path, const Field& u, const Field& p,
                      int n = 65);

}  // namespace lgstab
