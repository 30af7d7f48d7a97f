#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>

#include "commands.hpp"
#include "format.hpp"
#include "mandelq/errors.hpp"
#include "presets.hpp"
#include "sweep.hpp"

using namespace mandelq;
using namespace mandelq::cli;

namespace {

struct RunOutput {
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the installed binary through the shell; env assignments may be
// prefixed (e.g. "MANDELQ_NMAX=12").
RunOutput run_cli(const std::string& args, const std::string& env_prefix = "") {
  namespace fs = std::filesystem;
  const fs::path out_path = fs::temp_directory_path() / "mandelq_cli_stdout.txt";
  const fs::path err_path = fs::temp_directory_path() / "mandelq_cli_stderr.txt";
  const std::string command = env_prefix + (env_prefix.empty() ? "" : " ") +
                              std::string(MANDELQ_CLI_PATH) + " " + args + " > " +
                              out_path.string() + " 2> " + err_path.string();
  const int raw = std::system(command.c_str());
  RunOutput run;
  run.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  run.stdout_text = slurp(out_path);
  run.stderr_text = slurp(err_path);
  fs::remove(out_path);
  fs::remove(err_path);
  return run;
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (const char ch : text) {
    if (ch == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("reals format to the shortest round-trip decimal") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(-0.6666666666666666) == "-0.6666666666666666");
  CHECK(format_real(1e-9) == "1e-09");
}

TEST_CASE("complex values format and parse in both supported notations") {
  CHECK(format_complex({1.5, -0.25}) == "1.5-0.25i");
  CHECK(format_complex({0.0, 1.0}) == "0+1i");
  CHECK(format_complex({-0.0, -0.0}) == "0+0i");

  CHECK(parse_complex("1.5-0.25i") == Complex(1.5, -0.25));
  CHECK(parse_complex("2i") == Complex(0.0, 2.0));
  CHECK(parse_complex("i") == Complex(0.0, 1.0));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("3") == Complex(3.0, 0.0));
  CHECK(parse_complex("1e-3+2e-4i") == Complex(1e-3, 2e-4));
  CHECK(parse_complex("0.5,0.25") == Complex(0.5, 0.25));
  CHECK(parse_complex(format_complex({-1.25, 3.5})) == Complex(-1.25, 3.5));

  CHECK_THROWS_AS(parse_complex("abc"), ParseError);
  CHECK_THROWS_AS(parse_complex("1+2j"), ParseError);
  CHECK_THROWS_AS(parse_complex(""), ParseError);

  CHECK(cli::parse_real("0.25") == 0.25);
  CHECK_THROWS_AS(cli::parse_real("1.5x"), ParseError);
  CHECK_THROWS_AS(cli::parse_real(""), ParseError);
}

TEST_CASE("axis specs parse and expand with exact endpoints") {
  const Axis axis = parse_axis("a=0:1.5:31");
  CHECK(axis.name == "a");
  CHECK(axis.min == 0.0);
  CHECK(axis.max == 1.5);
  CHECK(axis.steps == 31);

  const std::vector<double> values = axis_values(axis);
  REQUIRE(values.size() == 31);
  CHECK(values.front() == 0.0);
  CHECK(values.back() == 1.5);

  CHECK_THROWS_AS(parse_axis("a=0:1.5"), ParseError);
  CHECK_THROWS_AS(parse_axis("=0:1:2"), ParseError);
  CHECK_THROWS_AS(parse_axis("a=x:1:2"), ParseError);
}

TEST_CASE("states assemble from name/value maps with family checking") {
  const TwoModeState state = assemble_state(
      "squeezed-coherent",
      {{"z1_abs", 2.0}, {"z1_arg", 1.5707963267948966}, {"a", 0.4}});
  const auto& sc = std::get<SqueezedCoherent>(state);
  CHECK(std::abs(sc.z1 - Complex(0.0, 2.0)) < 1e-15);
  CHECK(sc.z2 == Complex(0.0, 0.0));
  CHECK(sc.a == 0.4);
  CHECK(sc.b == 0.0);

  const auto& thermal = std::get<SqueezedThermal>(
      assemble_state("squeezed-thermal", {{"a", 0.3}}));
  CHECK(thermal.beta == 1.0);  // family default

  CHECK_THROWS_AS(assemble_state("squeezed-thermal", {{"z1_abs", 1.0}}),
                  ValidationError);
  CHECK_THROWS_AS(assemble_state("bogus-family", {}), ValidationError);
}

TEST_CASE("the preset table covers the published figure grids") {
  const std::vector<std::string>& names = preset_names();
  CHECK(names.size() == 20);
  CHECK(names.front() == "fig1a");
  CHECK(names.back() == "fig5d");

  const SweepSpec fig2c = preset_sweep("fig2c");
  CHECK(fig2c.family == "squeezed-coherent");
  CHECK(fig2c.fixed.at("z1_abs") == 2.0);
  CHECK(fig2c.fixed.at("z2_abs") == 2.0);
  CHECK(fig2c.fixed.at("z1_arg") == 0.0);
  CHECK(fig2c.fixed.at("z2_arg") == doctest::Approx(1.5707963267948966));
  REQUIRE(fig2c.axes.size() == 2);
  CHECK(fig2c.axes[0].name == "a");
  CHECK(fig2c.axes[1].name == "b");
  CHECK(fig2c.axes[0].steps == 31);

  const SweepSpec fig5b = preset_sweep("fig5b");
  CHECK(fig5b.family == "superposition");
  REQUIRE(fig5b.axes.size() == 2);
  CHECK(fig5b.axes[0].name == "r");
  CHECK(fig5b.axes[1].name == "eta");
  CHECK(fig5b.axes[1].steps == 181);

  CHECK_THROWS_AS(preset_sweep("fig9z"), ValidationError);
}

TEST_CASE("sweeps reject malformed grids before evaluating") {
  SweepSpec spec;
  spec.family = "squeezed-thermal";
  spec.axes = {Axis{"a", 0.0, 0.5, 2}};

  SweepSpec bad = spec;
  bad.axes[0].name = "z9";
  CHECK_THROWS_AS(run_sweep(bad), ValidationError);

  bad = spec;
  bad.axes[0].steps = 1;
  CHECK_THROWS_AS(run_sweep(bad), ValidationError);

  bad = spec;
  bad.axes[0].min = 1.0;
  bad.axes[0].max = 0.0;
  CHECK_THROWS_AS(run_sweep(bad), ValidationError);

  bad = spec;
  bad.fixed["a"] = 0.2;  // collides with the axis
  CHECK_THROWS_AS(run_sweep(bad), ValidationError);

  bad = spec;
  bad.axes = {Axis{"a", 0.0, 0.5, 2}, Axis{"b", 0.0, 0.5, 2},
              Axis{"beta", 1.0, 2.0, 2}};
  CHECK_THROWS_AS(run_sweep(bad), ValidationError);
}

TEST_CASE("a small thermal sweep renders the documented CSV table") {
  SweepSpec spec;
  spec.family = "squeezed-thermal";
  spec.fixed = {{"beta", 1.0}, {"b", 0.1}};
  spec.axes = {Axis{"a", 0.0, 0.3, 2}};

  const SweepResult result = run_sweep(spec);
  REQUIRE(result.rows.size() == 2);
  for (const SweepRow& row : result.rows) {
    REQUIRE(row.result.has_value());
    CHECK(row.result->q_min > 0.0);  // thermal noise keeps Q super-Poissonian
  }

  const std::string csv = to_csv(spec, result);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "a,Q,q1,q2,q3,method,degenerate_flag");
  CHECK(count_lines(csv) == 3);
}

TEST_CASE("zero-intensity grid points are reported in place, not fatal") {
  SweepSpec spec;
  spec.family = "squeezed-coherent";
  spec.axes = {Axis{"a", 0.0, 0.5, 2}};  // all other parameters default to 0

  const SweepResult result = run_sweep(spec);
  REQUIRE(result.rows.size() == 2);
  CHECK_FALSE(result.rows[0].result.has_value());  // vacuum corner
  REQUIRE(result.rows[1].result.has_value());
  CHECK(result.rows[1].result->q_min > 0.0);  // squeezed vacuum stays super-Poissonian

  const std::string csv = to_csv(spec, result);
  CHECK(csv.find("\n0,,,,,,undefined\n") != std::string::npos);

  spec.format = SweepSpec::Format::Json;
  const std::string json = to_json(spec, result);
  CHECK(json.find("\"tool_version\": \"1.0.0\"") != std::string::npos);
  CHECK(json.find("null") != std::string::npos);
  CHECK(json.find("\"family\": \"squeezed-coherent\"") != std::string::npos);
}

TEST_CASE("point command prints the minimum report in process") {
  std::ostringstream out;
  const int status = run_point(TwoModeState{Fock{1, 0}}, std::nullopt, true, out);
  CHECK(status == 0);
  const std::string text = out.str();
  CHECK(text.find("family: fock") != std::string::npos);
  CHECK(text.find("Q_min: -1\n") != std::string::npos);
  CHECK(text.find("method: secular-exact") != std::string::npos);
  CHECK(text.find("q_bar: (0, 0, 1)") != std::string::npos);
}

TEST_CASE("cutoff resolution prefers the flag over the environment") {
  unsetenv("MANDELQ_NMAX");
  CHECK_FALSE(resolve_n_max(std::nullopt).has_value());
  CHECK(resolve_n_max(12) == 12);

  setenv("MANDELQ_NMAX", "7", 1);
  CHECK(resolve_n_max(std::nullopt) == 7);
  CHECK(resolve_n_max(12) == 12);

  setenv("MANDELQ_NMAX", "seven", 1);
  CHECK_THROWS_AS(resolve_n_max(std::nullopt), ParseError);
  setenv("MANDELQ_NMAX", "0", 1);
  CHECK_THROWS_AS(resolve_n_max(std::nullopt), ParseError);
  unsetenv("MANDELQ_NMAX");

  CHECK_THROWS_AS(resolve_n_max(0), ValidationError);
}

TEST_CASE("executable honors the exit-code contract") {
  const RunOutput fock = run_cli("point fock --n1 1 --n2 0");
  CHECK(fock.exit_code == 0);
  CHECK(fock.stdout_text.find("Q_min: -1\n") != std::string::npos);

  const RunOutput vacuum = run_cli("point squeezed-coherent");
  CHECK(vacuum.exit_code == 2);
  CHECK(vacuum.stderr_text.find("vacuum") != std::string::npos);

  const RunOutput usage = run_cli("point fock --definitely-not-a-flag 1");
  CHECK(usage.exit_code == 1);

  const RunOutput missing = run_cli("custom /nonexistent/mandelq/rho.txt");
  CHECK(missing.exit_code == 3);
  CHECK(missing.stderr_text.find("error:") != std::string::npos);

  const RunOutput bad_env = run_cli("point fock --n1 1 --n2 0", "MANDELQ_NMAX=abc");
  CHECK(bad_env.exit_code == 3);
  CHECK(bad_env.stderr_text.find("MANDELQ_NMAX") != std::string::npos);

  const RunOutput good_env = run_cli("point fock --n1 1 --n2 0", "MANDELQ_NMAX=9");
  CHECK(good_env.exit_code == 0);

  const RunOutput version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.stdout_text.find("1.0.0") != std::string::npos);
}

TEST_CASE("executable streams sweep tables and runs the validator") {
  const RunOutput sweep = run_cli(
      "sweep squeezed-thermal --set beta=1 --set b=0.1 --axis a=0:0.3:2");
  CHECK(sweep.exit_code == 0);
  CHECK(sweep.stdout_text.rfind("a,Q,q1,q2,q3,method,degenerate_flag\n", 0) == 0);
  CHECK(count_lines(sweep.stdout_text) == 3);

  const RunOutput validate = run_cli("validate fock --max-n 2 --directions 4");
  CHECK(validate.exit_code == 0);
  CHECK(validate.stdout_text.find("32 evaluations, 32 match, 0 mismatch") !=
        std::string::npos);
}
