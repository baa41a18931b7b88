// End-to-end checks of the command-line tool: spawn the real binary, parse
// the CSV it writes, and verify exit codes, row layout, and determinism.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct CliResult {
  int exit_code = -1;
  std::vector<std::vector<std::string>> rows;  // parsed CSV, header included
  std::string raw;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out = "cli_test_out_" + std::to_string(counter++) + ".csv";
  const std::string cmd = std::string(GOSA_CLI_PATH) + " " + args + " > " + out + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
#ifdef _WIN32
  r.exit_code = status;
#else
  r.exit_code = WEXITSTATUS(status);
#endif
  std::ifstream in(out);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.raw = buf.str();
  std::istringstream lines(r.raw);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) r.rows.push_back(split_csv_line(line));
  }
  std::remove(out.c_str());
  return r;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  REQUIRE_MESSAGE(false, "missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("estimate: header, row count, and row order for a parameter sweep") {
  const auto r = run_cli(
      "estimate --model ishigami --contrast quantile --alpha-grid 0.05:0.95:19 "
      "--n1 200 --n2 200 --seed 1 --replicates 2");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.rows.size() == 1 + 19 * 3);  // header + params x variables
  const auto& header = r.rows[0];
  CHECK(header[0] == "run_id");
  const std::size_t subset_col = column(header, "subset");
  const std::size_t param_col = column(header, "param");
  const std::size_t est_col = column(header, "estimate");
  // param-major order, subsets 1..3 within each parameter
  CHECK(r.rows[1][subset_col] == "1");
  CHECK(r.rows[2][subset_col] == "2");
  CHECK(r.rows[3][subset_col] == "3");
  CHECK(std::stod(r.rows[1][param_col]) == doctest::Approx(0.05));
  CHECK(std::stod(r.rows[4][param_col]) == doctest::Approx(0.10));
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const double v = std::stod(r.rows[i][est_col]);
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("estimate: agrees with the closed form on the quantile example") {
  const auto r = run_cli(
      "estimate --model example1 --contrast quantile --alpha 0.5 "
      "--n1 2000 --n2 2000 --seed 7 --replicates 5 --subset 1");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.rows.size() == 2);
  const std::size_t est_col = column(r.rows[0], "estimate");
  const double expected = 1.0 + std::log(0.5);
  CHECK(std::stod(r.rows[1][est_col]) == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("estimate: degenerate sweep point is flagged, strict mode exits 2") {
  // a threshold of 0 is never exceeded being missed: P(Y >= 0) = 1 identically
  const auto lax = run_cli(
      "estimate --model example2 --contrast excess --t 0 "
      "--n1 100 --n2 100 --seed 3 --replicates 2 --subset 1");
  REQUIRE(lax.exit_code == 0);
  REQUIRE(lax.rows.size() == 2);
  const std::size_t flag_col = column(lax.rows[0], "degenerate_flag");
  const std::size_t est_col = column(lax.rows[0], "estimate");
  CHECK(lax.rows[1][flag_col] == "1");
  CHECK(lax.rows[1][est_col].empty());

  const auto strict = run_cli(
      "estimate --model example2 --contrast excess --t 0 "
      "--n1 100 --n2 100 --seed 3 --replicates 2 --subset 1 --strict");
  CHECK(strict.exit_code == 2);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("estimate --model nosuch --contrast mean").exit_code == 1);
  CHECK(run_cli("estimate --model ishigami --contrast nosuch").exit_code == 1);
  CHECK(run_cli("estimate --model ishigami").exit_code == 1);  // contrast required
  CHECK(run_cli("estimate --model ishigami --contrast mean --subset 9").exit_code == 1);
  CHECK(run_cli("estimate --model ishigami --contrast quantile --alpha-grid bogus").exit_code == 1);
  CHECK(run_cli("estimate --model ishigami --contrast kernel-density "
                "--grid-spec -10:10:21").exit_code == 1);  // bandwidth missing
  CHECK(run_cli("oracle").exit_code == 1);
}

TEST_CASE("output is byte-identical across repeats and worker counts") {
  const std::string base =
      "estimate --model example2 --a 0.7 --contrast excess --t-grid 0.5:2:4 "
      "--n1 300 --n2 300 --seed 11 --replicates 3";
  const auto once = run_cli(base + " --threads 1");
  REQUIRE(once.exit_code == 0);
  CHECK(run_cli(base + " --threads 1").raw == once.raw);
  CHECK(run_cli(base + " --threads 2").raw == once.raw);
  CHECK(run_cli(base + " --threads 8").raw == once.raw);
}

TEST_CASE("oracle subcommand emits analytic rows") {
  const auto ish = run_cli("oracle --ishigami");
  REQUIRE(ish.exit_code == 0);
  REQUIRE(ish.rows.size() == 4);
  const std::size_t est_col = column(ish.rows[0], "estimate");
  const std::size_t mode_col = column(ish.rows[0], "mode");
  CHECK(ish.rows[1][mode_col] == "analytic");
  CHECK(std::stod(ish.rows[1][est_col]) == doctest::Approx(0.3139));
  CHECK(std::stod(ish.rows[2][est_col]) == doctest::Approx(0.4424));
  CHECK(std::stod(ish.rows[3][est_col]) == doctest::Approx(0.0));

  const auto ex1 = run_cli("oracle --example 1 --alpha-grid 0.1:0.9:9");
  REQUIRE(ex1.exit_code == 0);
  CHECK(ex1.rows.size() == 1 + 9 * 2);

  const auto ml = run_cli("oracle --gaussian-ml --theta 0");
  REQUIRE(ml.exit_code == 0);
  REQUIRE(ml.rows.size() == 3);
  CHECK(std::stod(ml.rows[1][column(ml.rows[0], "estimate")]) == 0.0);
  CHECK(std::stod(ml.rows[2][column(ml.rows[0], "estimate")]) == 1.0);
}

TEST_CASE("compare subcommand joins estimates with oracle values") {
  const auto r = run_cli(
      "compare --model example2 --a 1 --contrast mean "
      "--n1 1500 --n2 1500 --seed 5 --replicates 5");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.rows.size() == 3);
  const auto& header = r.rows[0];
  const std::size_t oracle_col = column(header, "oracle");
  const std::size_t abs_col = column(header, "abs_error");
  const std::size_t z_col = column(header, "z_score");
  for (std::size_t i = 1; i <= 2; ++i) {
    CHECK(std::stod(r.rows[i][oracle_col]) == doctest::Approx(0.5));
    CHECK(std::stod(r.rows[i][abs_col]) < 0.1);
    CHECK(std::isfinite(std::stod(r.rows[i][z_col])));
  }
  // no closed form for this pair
  CHECK(run_cli("compare --model ishigami --contrast median --n1 100 --n2 100").exit_code == 1);
}

TEST_CASE("--out writes the same CSV to a file") {
  const std::string path = "cli_test_file_out.csv";
  const std::string base =
      "estimate --model gaussian-linear --theta 1 --contrast mean "
      "--n1 200 --n2 200 --seed 2 --replicates 2";
  const auto stdout_run = run_cli(base);
  REQUIRE(stdout_run.exit_code == 0);
  const auto file_run = run_cli(base + " --out " + path);
  REQUIRE(file_run.exit_code == 0);
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == stdout_run.raw);
  std::remove(path.c_str());
}
