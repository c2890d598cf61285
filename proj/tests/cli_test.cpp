#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "json.hpp"

#include "support/golden.hpp"
#include "support/json_schema.hpp"
#include "support/proc.hpp"

using nlohmann::json;
using testsupport::ProcResult;
using testsupport::lines;
using testsupport::run;
using testsupport::validate_schema;

namespace {

std::string g_krige;  // path to the CLI binary under test
std::string g_root;   // repository root (data, schemas, goldens)

std::string data_file(const std::string& name) {
  return g_root + "/tests/data/" + name;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open ", path);
  return json::parse(in);
}

json schema(const std::string& name) {
  return load_json_file(g_root + "/schemas/" + name + ".schema.json");
}

void check_line_against(const std::string& line, const json& schema_doc) {
  std::string why;
  const bool ok = validate_schema(json::parse(line), schema_doc, &why);
  CHECK_MESSAGE(ok, "schema violation: ", why, " in line: ", line);
}

void check_against_golden(const std::string& got, const std::string& name) {
  const std::string golden_text =
      testsupport::slurp(g_root + "/tests/golden/" + name);
  REQUIRE_MESSAGE(!golden_text.empty(), "missing golden file ", name);
  std::string why;
  const bool ok = testsupport::jsonl_close(got, golden_text, &why);
  CHECK_MESSAGE(ok, name, ": ", why);
}

void check_error(const ProcResult& result, int code, const std::string& name) {
  CHECK(result.exit_code == code);
  const auto err_lines = lines(result.err);
  REQUIRE_MESSAGE(!err_lines.empty(), "expected an error record on stderr");
  const json record = json::parse(err_lines.back());
  check_line_against(err_lines.back(), schema("error_record"));
  CHECK(record["error"] == name);
}

}  // namespace

TEST_CASE("predict matches its golden output and schema") {
  const ProcResult r = run(g_krige + " predict --data " +
                           data_file("samples10.csv") +
                           " --model exponential --range 1.5 --sigma2 2"
                           " --nugget 0.1 --target 0.5,1.5 --target 1.5,0.5"
                           " --verbose");
  CHECK(r.exit_code == 0);
  CHECK(r.err.empty());
  for (const auto& line : lines(r.out)) {
    check_line_against(line, schema("predict_record"));
  }
  check_against_golden(r.out, "predict.jsonl");
}

TEST_CASE("grid prediction walks the grid in row-major order") {
  const ProcResult r = run(g_krige + " predict --data " +
                           data_file("samples10.csv") +
                           " --model white_noise --sigma2 1 --grid 0:2:3,0:2:3");
  CHECK(r.exit_code == 0);
  const auto out_lines = lines(r.out);
  REQUIRE(out_lines.size() == 9);
  const json first = json::parse(out_lines[0]);
  const json second = json::parse(out_lines[1]);
  const json fourth = json::parse(out_lines[3]);
  CHECK(first["target"] == json::array({0.0, 0.0}));
  CHECK(second["target"] == json::array({0.0, 1.0}));   // last axis fastest
  CHECK(fourth["target"] == json::array({1.0, 0.0}));
  for (const auto& line : out_lines) {
    check_line_against(line, schema("predict_record"));
  }
  check_against_golden(r.out, "predict_grid.jsonl");
}

TEST_CASE("predicting at a sample location returns its value with zero variance") {
  const ProcResult r = run(g_krige + " predict --data " +
                           data_file("samples10.csv") +
                           " --model exponential --range 1.5 --sigma2 1"
                           " --target 1,1");
  CHECK(r.exit_code == 0);
  const json record = json::parse(lines(r.out).at(0));
  CHECK(record["estimate"].get<double>() == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(record["kriging_variance"].get<double>() <= 1e-10);
  CHECK(record["estimator_variance"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("white-noise prediction reports sigma2 (1 + 1/n)") {
  const ProcResult r = run(g_krige + " predict --data " +
                           data_file("samples10.csv") +
                           " --model white_noise --sigma2 1 --target 0.25,0.25");
  CHECK(r.exit_code == 0);
  const json record = json::parse(lines(r.out).at(0));
  CHECK(record["kriging_variance"].get<double>() ==
        doctest::Approx(1.1).epsilon(1e-10));
}

TEST_CASE("mean matches its golden output and schema") {
  const ProcResult r = run(g_krige + " mean --data " +
                           data_file("samples10.csv") +
                           " --model exponential --range 1.5 --sigma2 2"
                           " --nugget 0.1 --check");
  CHECK(r.exit_code == 0);
  const auto out_lines = lines(r.out);
  REQUIRE(out_lines.size() == 1);
  check_line_against(out_lines[0], schema("mean_record"));
  const json record = json::parse(out_lines[0]);
  CHECK(record["check_discrepancy"].get<double>() <= 1e-10);
  check_against_golden(r.out, "mean.jsonl");
}

TEST_CASE("validate matches its golden output and schemas") {
  const ProcResult r = run(g_krige + " validate --data " +
                           data_file("samples10.csv") +
                           " --model gaussian --range 1.2 --sigma2 1");
  CHECK(r.exit_code == 0);
  const auto out_lines = lines(r.out);
  REQUIRE(out_lines.size() == 11);  // 10 folds plus the summary
  for (std::size_t i = 0; i + 1 < out_lines.size(); ++i) {
    check_line_against(out_lines[i], schema("validate_fold_record"));
  }
  check_line_against(out_lines.back(), schema("validate_summary_record"));
  const json summary = json::parse(out_lines.back());
  CHECK(summary["folds_evaluated"] == 10);
  check_against_golden(r.out, "validate.jsonl");
}

TEST_CASE("simulate matches its golden output and schema") {
  const std::string command = g_krige +
                              " simulate --model white_noise --sigma2 1"
                              " --n 4 --replicates 5000 --seed 7";
  const ProcResult r = run(command);
  CHECK(r.exit_code == 0);
  const auto out_lines = lines(r.out);
  REQUIRE(out_lines.size() == 1);
  check_line_against(out_lines[0], schema("simulate_report"));
  const json record = json::parse(out_lines[0]);
  CHECK(record["analytic_kriging_variance"].get<double>() ==
        doctest::Approx(1.25).epsilon(1e-12));
  CHECK(record["pass_mse"] == true);
  CHECK(record["pass_estimator"] == true);
  check_against_golden(r.out, "simulate.jsonl");

  // Bit-identical on a rerun with the same seed.
  const ProcResult again = run(command);
  CHECK(again.out == r.out);
}

TEST_CASE("simulate over a schedule emits one report per entry") {
  const ProcResult r = run(g_krige +
                           " simulate --model white_noise --sigma2 1"
                           " --schedule 1,10,100 --replicates 4000 --seed 3");
  CHECK(r.exit_code == 0);
  const auto out_lines = lines(r.out);
  REQUIRE(out_lines.size() == 3);
  const double expected[] = {2.0, 1.1, 1.01};
  for (std::size_t i = 0; i < 3; ++i) {
    check_line_against(out_lines[i], schema("simulate_report"));
    const json record = json::parse(out_lines[i]);
    CHECK(record["analytic_kriging_variance"].get<double>() ==
          doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("stats matches its golden output and schema") {
  const ProcResult r = run(g_krige + " stats --data " +
                           data_file("samples10.csv"));
  CHECK(r.exit_code == 0);
  const auto out_lines = lines(r.out);
  REQUIRE(out_lines.size() == 1);
  check_line_against(out_lines[0], schema("stats_record"));
  check_against_golden(r.out, "stats.jsonl");
}

TEST_CASE("--out redirects the records to a file") {
  const std::string out_path = "/tmp/krig_cli_out_test.jsonl";
  std::remove(out_path.c_str());
  const ProcResult r = run(g_krige + " stats --data " +
                           data_file("samples10.csv") + " --out " + out_path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  const std::string written = testsupport::slurp(out_path);
  CHECK_FALSE(written.empty());
  check_line_against(lines(written).at(0), schema("stats_record"));
  std::remove(out_path.c_str());
}

TEST_CASE("help is printed to stdout with exit 0") {
  const ProcResult r = run(g_krige + " --help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("predict") != std::string::npos);
  const ProcResult sub = run(g_krige + " predict --help");
  CHECK(sub.exit_code == 0);
  CHECK(sub.out.find("--target") != std::string::npos);
}

TEST_CASE("configuration errors exit 2 with a structured record") {
  const std::string data = data_file("samples10.csv");

  SUBCASE("missing data file") {
    check_error(run(g_krige + " predict --data /nonexistent.csv"
                    " --model white_noise --sigma2 1 --target 0,0"),
                2, "io_error");
  }
  SUBCASE("unknown model") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model matern --sigma2 1 --target 0,0"),
                2, "invalid_argument");
  }
  SUBCASE("missing sigma2") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --target 0,0"),
                2, "invalid_argument");
  }
  SUBCASE("nonpositive sigma2") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 0 --target 0,0"),
                2, "invalid_argument");
  }
  SUBCASE("range given for white noise") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --range 1 --sigma2 1 --target 0,0"),
                2, "invalid_argument");
  }
  SUBCASE("range missing for exponential") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model exponential --sigma2 1 --target 0,0"),
                2, "invalid_argument");
  }
  SUBCASE("nugget outside [0,1)") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 1 --nugget 1.5"
                    " --target 0,0"),
                2, "invalid_argument");
  }
  SUBCASE("malformed target") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 1 --target abc"),
                2, "invalid_argument");
  }
  SUBCASE("target dimension mismatch") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 1 --target 0.5"),
                2, "invalid_argument");
  }
  SUBCASE("target and grid together") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 1 --target 0,0"
                    " --grid 0:1:2,0:1:2"),
                2, "invalid_argument");
  }
  SUBCASE("neither target nor grid") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 1"),
                2, "invalid_argument");
  }
  SUBCASE("malformed grid axis") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 1 --grid 0:1"),
                2, "invalid_argument");
  }
  SUBCASE("grid axis count mismatch") {
    check_error(run(g_krige + " predict --data " + data +
                    " --model white_noise --sigma2 1 --grid 0:1:2"),
                2, "invalid_argument");
  }
  SUBCASE("non-increasing schedule") {
    check_error(run(g_krige + " simulate --model white_noise --sigma2 1"
                    " --schedule 5,5 --replicates 10"),
                2, "invalid_argument");
  }
  SUBCASE("n and schedule together") {
    check_error(run(g_krige + " simulate --model white_noise --sigma2 1"
                    " --n 4 --schedule 1,2 --replicates 10"),
                2, "invalid_argument");
  }
  SUBCASE("neither n nor schedule") {
    check_error(run(g_krige + " simulate --model white_noise --sigma2 1"
                    " --replicates 10"),
                2, "invalid_argument");
  }
  SUBCASE("replicate budget exceeded") {
    check_error(run(g_krige + " simulate --model white_noise --sigma2 1"
                    " --n 4 --replicates 1000000 --budget 1000"),
                2, "budget_exceeded");
  }
  SUBCASE("stats needs two rows") {
    const std::string tiny = "/tmp/krig_cli_tiny.csv";
    std::ofstream(tiny) << "x,value\n0,1\n";
    check_error(run(g_krige + " stats --data " + tiny), 2,
                "invalid_argument");
    std::remove(tiny.c_str());
  }
  SUBCASE("unknown flag is a parse error") {
    const ProcResult r = run(g_krige + " predict --bogus 1");
    CHECK(r.exit_code == 2);
    check_line_against(lines(r.err).at(0), schema("error_record"));
  }
  SUBCASE("missing subcommand") {
    const ProcResult r = run(g_krige);
    CHECK(r.exit_code == 2);
    check_line_against(lines(r.err).at(0), schema("error_record"));
  }
}

TEST_CASE("numerical failures exit 3 with a structured record") {
  SUBCASE("duplicate locations make prediction singular") {
    const ProcResult r = run(g_krige + " predict --data " +
                             data_file("duplicates.csv") +
                             " --model white_noise --sigma2 1 --target 0.5");
    CHECK(r.exit_code == 3);
    const auto err_lines = lines(r.err);
    REQUIRE(err_lines.size() == 2);  // duplicate warning, then the error
    check_line_against(err_lines[0], schema("warning_record"));
    check_line_against(err_lines[1], schema("error_record"));
    CHECK(json::parse(err_lines[1])["error"] == "singular_system");
  }
  SUBCASE("duplicate locations make the mean system singular") {
    const ProcResult r = run(g_krige + " mean --data " +
                             data_file("duplicates.csv") +
                             " --model gaussian --range 1 --sigma2 1");
    CHECK(r.exit_code == 3);
    CHECK(json::parse(lines(r.err).back())["error"] == "singular_system");
  }
}

TEST_CASE("KRIGE_NUMERIC_POLICY overrides flow into the solver") {
  const std::string data = data_file("samples10.csv");
  const std::string policy_path = "/tmp/krig_cli_policy.json";

  SUBCASE("valid override keeps working") {
    std::ofstream(policy_path) << R"({"weight_sum_tol": 1e-8})";
    const ProcResult r = run("KRIGE_NUMERIC_POLICY=" + policy_path + " " +
                             g_krige + " predict --data " + data +
                             " --model white_noise --sigma2 1 --target 0,0");
    CHECK(r.exit_code == 0);
  }
  SUBCASE("an impossible condition threshold rejects every solve") {
    // The augmented system's reciprocal condition is always below 1, so
    // demanding rcond > 1/1.0001 proves the override reaches the solver.
    std::ofstream(policy_path) << R"({"condition_threshold": 1.0001})";
    const ProcResult r = run("KRIGE_NUMERIC_POLICY=" + policy_path + " " +
                             g_krige + " predict --data " + data +
                             " --model white_noise --sigma2 1 --target 0,0");
    check_error(r, 3, "singular_system");
  }
  SUBCASE("missing policy file") {
    const ProcResult r = run("KRIGE_NUMERIC_POLICY=/nonexistent_policy.json " +
                             g_krige + " stats --data " + data);
    check_error(r, 2, "io_error");
  }
  SUBCASE("malformed policy JSON") {
    std::ofstream(policy_path) << "{not json";
    const ProcResult r = run("KRIGE_NUMERIC_POLICY=" + policy_path + " " +
                             g_krige + " stats --data " + data);
    check_error(r, 2, "parse_error");
  }
  SUBCASE("unknown policy key") {
    std::ofstream(policy_path) << R"({"wrong_key": 1.0})";
    const ProcResult r = run("KRIGE_NUMERIC_POLICY=" + policy_path + " " +
                             g_krige + " stats --data " + data);
    check_error(r, 2, "invalid_argument");
  }
  SUBCASE("nonpositive policy value") {
    std::ofstream(policy_path) << R"({"residual_tol": -1})";
    const ProcResult r = run("KRIGE_NUMERIC_POLICY=" + policy_path + " " +
                             g_krige + " stats --data " + data);
    check_error(r, 2, "invalid_argument");
  }
  std::remove(policy_path.c_str());
}

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr,
                 "usage: krig_cli_tests <krige-binary> <repo-root> "
                 "[doctest options]\n");
    return 1;
  }
  g_krige = argv[1];
  g_root = argv[2];

  doctest::Context context;
  context.applyCommandLine(argc - 2, argv + 2);
  return context.run();
}
