#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "h1s2s/cli.hpp"
#include "h1s2s/output.hpp"

using namespace h1s2s;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("h1s2s_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST(Cli, Budget) {
  CommandRequest r;
  r.command = "budget";
  r.arguments = {"550", "775"};
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run(r, out, err), 0);
  EXPECT_NE(out.str().find("56.25 Hz"), std::string::npos);
  r.arguments = {"550", "500"};
  EXPECT_NE(run(r, out, err), 0);
  EXPECT_NE(err.str().find("budget"), std::string::npos);
}

TEST(Cli, UnknownCommandAndBadConfig) {
  std::ostringstream out;
  std::ostringstream err;
  CommandRequest r;
  r.command = "fly";
  EXPECT_NE(run(r, out, err), 0);
  r.command = "line";
  r.overrides = {"temperature_k=-1"};
  r.output_dir = fresh_dir("bad");
  EXPECT_NE(run(r, out, err), 0);
  EXPECT_NE(err.str().find("temperature_k"), std::string::npos);
}

TEST(Cli, PowerScanFilesAndReproducibility) {
  const fs::path a = fresh_dir("scan_a");
  const fs::path b = fresh_dir("scan_b");
  CommandRequest r;
  r.command = "power-scan";
  r.overrides = {"atoms_per_line=12", "detuning_points=15", "powers_w=0.05,0.1,0.3,0.5",
                 "threads=1"};
  r.seed_override = 4;
  std::ostringstream out;
  std::ostringstream err;
  r.output_dir = a;
  ASSERT_EQ(run(r, out, err), 0) << err.str();
  r.output_dir = b;
  r.overrides.back() = "threads=3";
  ASSERT_EQ(run(r, out, err), 0) << err.str();

  for (const char* name : {"scan.csv", "scan_summary.json", "line_50.csv", "line_100.csv",
                           "line_300.csv", "line_500.csv", "config_echo.conf"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    if (std::string(name) != "config_echo.conf") {
      EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
  }
  EXPECT_EQ(first_line(slurp(a / "scan.csv")), "power_w,center_hz,fwhm_hz,amplitude,offset,converged");
  EXPECT_EQ(first_line(slurp(a / "line_300.csv")), "detuning_hz,signal,atoms_used");
  EXPECT_NE(out.str().find("k_shift"), std::string::npos);
}

TEST(Cli, LineWritesSidecar) {
  const fs::path dir = fresh_dir("line");
  CommandRequest r;
  r.command = "line";
  r.overrides = {"atoms_per_line=10", "detuning_points=15", "record_atoms=true"};
  std::ostringstream out;
  std::ostringstream err;
  r.output_dir = dir;
  ASSERT_EQ(run(r, out, err), 0) << err.str();
  EXPECT_EQ(first_line(slurp(dir / "line.csv")), kSpectrumCsvHeader);
  const std::string sidecar = slurp(dir / "line.json");
  EXPECT_NE(sidecar.find("config_fingerprint"), std::string::npos);
  EXPECT_NE(sidecar.find("\"seed\": 20060101"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "atoms.csv"));
}

TEST(Cli, RectPulseWritesBothSpectra) {
  const fs::path dir = fresh_dir("rect");
  CommandRequest r;
  r.command = "rect-pulse";
  std::ostringstream out;
  std::ostringstream err;
  r.output_dir = dir;
  ASSERT_EQ(run(r, out, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(dir / "rect_ion1.csv"));
  EXPECT_TRUE(fs::exists(dir / "rect_ion0.csv"));
}

TEST(Cli, EchoedConfigReproducesRun) {
  const fs::path a = fresh_dir("echo_a");
  const fs::path b = fresh_dir("echo_b");
  CommandRequest r;
  r.command = "line";
  r.overrides = {"atoms_per_line=8", "detuning_points=11", "power_per_direction_w=0.2"};
  std::ostringstream out;
  std::ostringstream err;
  r.output_dir = a;
  ASSERT_EQ(run(r, out, err), 0) << err.str();
  CommandRequest again;
  again.command = "line";
  again.config_path = a / "config_echo.conf";
  again.output_dir = b;
  ASSERT_EQ(run(again, out, err), 0) << err.str();
  EXPECT_EQ(slurp(a / "line.csv"), slurp(b / "line.csv"));
  EXPECT_EQ(slurp(a / "config_echo.conf"), slurp(b / "config_echo.conf"));
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(56.25), "56.25");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333");
  EXPECT_EQ(format_number(123456789.0), "1.23457e+08");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(line_file_stem(0.15), "line_150");
  EXPECT_EQ(line_file_stem(1.2), "line_1200");
}
