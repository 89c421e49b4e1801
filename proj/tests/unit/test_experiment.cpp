#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lgstab/errors.hpp"
#include "lgstab/experiment.hpp"

using namespace lgstab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lgstab_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Experiment, Presets) {
  ExperimentSpec s;
  s.case_name = "b";
  const auto b = resolve_preset(s);
  EXPECT_EQ(b.schemes, (std::vector{Scheme::O_TH, Scheme::O_PS}));
  EXPECT_EQ(*b.cp, 10.0);
  EXPECT_EQ(*b.delta0, 0.1);
  s.case_name = "c";
  EXPECT_EQ(resolve_preset(s).schemes, (std::vector{Scheme::NS_TH, Scheme::NS_PS}));
  EXPECT_EQ(*resolve_preset(s).cp, 1.0);
  s.case_name = "ex42";
  const auto e = resolve_preset(s);
  EXPECT_EQ(*e.dt, 0.01);
  EXPECT_EQ(*e.delta0, 1e-3);
  EXPECT_EQ(e.nus, std::vector<double>{1e-4});
  s.case_name = "zzz";
  EXPECT_THROW(resolve_preset(s), InvalidArgument);
}

TEST(Experiment, CaseAProducesRowsAndPlot) {
  ExperimentSpec s;
  s.case_name = "a";
  s.nus = {1e-2};
  s.N_list = {4, 6, 8};
  s.T = 0.1;
  s.jobs = 2;
  s.out_dir = scratch("case_a");
  const auto r = run_case(s);
  EXPECT_EQ(r.rows.size(), 6u);
  const auto csv = lines(slurp(r.csv));
  ASSERT_EQ(csv.size(), 7u);
  EXPECT_EQ(csv[0], kCsvHeader);
  for (std::size_t i = 1; i < csv.size(); ++i) EXPECT_EQ(std::count(csv[i].begin(), csv[i].end(), ','), 13);
  const std::string svg = slurp(r.svg);
  EXPECT_NE(svg.find("width=\"800\" height=\"600\""), std::string::npos);
  EXPECT_NE(svg.find("slope"), std::string::npos);

  const std::string first = slurp(r.csv);
  s.jobs = 1;
  run_case(s);
  EXPECT_EQ(slurp(r.csv), first);
}

TEST(Experiment, CustomZeroCaseIsTrivial) {
  ExperimentSpec s;
  s.case_name = "custom";
  s.N_list = {2, 3};
  s.T = 0.2;
  s.dt = 0.1;
  s.out_dir = scratch("custom");
  const auto r = run_case(s);
  for (const auto& row : r.rows) {
    EXPECT_TRUE(row.error.empty());
    EXPECT_EQ(row.slope_flag, "trivial");
    EXPECT_EQ(row.errors.E_linf_L2_u, 0.0);
    EXPECT_EQ(row.errors.E_l2_L2_p, 0.0);
  }
}

TEST(Experiment, Ex42Outputs) {
  ExperimentSpec s;
  s.case_name = "ex42";
  s.N_list = {4};
  s.T = 0.05;
  s.out_dir = scratch("ex42");
  const auto r = run_case(s);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(fs::exists(s.out_dir / "ex42_NS_TH_N4_final.txt"));
  EXPECT_TRUE(fs::exists(s.out_dir / "ex42_NS_PS_N4_final.txt"));
  const auto summary = lines(slurp(s.out_dir / "ex42_summary.csv"));
  EXPECT_EQ(summary.size(), 3u);
  EXPECT_EQ(lines(slurp(s.out_dir / "ex42_NS_PS_N4_final.txt")).size(), 65u * 65u);
}

TEST(Experiment, FailedRunIsRecorded) {
  ExperimentSpec s;
  s.case_name = "a";
  s.nus = {1e-2};
  s.N_list = {4};
  s.T = 0.2;
  s.dt = 0.1;
  s.strict = true;  // dt |w|_{1,inf} is far above 1/4 here
  s.out_dir = scratch("fail");
  const auto r = run_case(s);
  for (const auto& row : r.rows) EXPECT_FALSE(row.error.empty());
  const auto csv = lines(slurp(r.csv));
  EXPECT_NE(csv[1].find(",nan,nan,nan,error:"), std::string::npos);
  EXPECT_EQ(std::count(csv[1].begin(), csv[1].end(), ','), 13);
}

TEST(Experiment, UnwritableDirectory) {
  ExperimentSpec s;
  s.case_name = "custom";
  s.N_list = {2};
  s.out_dir = "/proc/lgstab_no_such_dir";
  EXPECT_ANY_THROW(run_case(s));
}
