#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "format.hpp"
#include "presets.hpp"
#include "sweep.hpp"
#include "version.hpp"
#include "mandelq/errors.hpp"
#include "mandelq/types.hpp"

namespace {

std::string preset_help() {
  std::string help = "built-in figure-data sweep (";
  const auto& names = mandelq::cli::preset_names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (k > 0) help += ", ";
    help += names[k];
  }
  help += ")";
  return help;
}

}  // namespace

int main(int argc, char** argv) {
  using mandelq::cli::ValidateRequest;

  CLI::App app{"U(2)-invariant two-mode Mandel parameter"};
  app.set_version_flag("--version", std::string(mandelq::cli::k_tool_version));
  app.require_subcommand(1);

  // ---- point ---------------------------------------------------------------
  auto* point = app.add_subcommand("point", "minimize Q for one state and print the result");
  point->require_subcommand(1);

  std::optional<int> point_n_max;
  bool point_no_cross_check = false;
  const auto add_point_common = [&](CLI::App* cmd) {
    cmd->add_option("--n-max", point_n_max,
                    "per-mode cutoff forcing the truncated-operator path "
                    "(default: exact moments; env MANDELQ_NMAX)");
    cmd->add_flag("--no-cross-check", point_no_cross_check,
                  "skip the closed-form cross-check of the minimum");
  };

  struct {
    int n1 = 0;
    int n2 = 0;
  } fock_args;
  auto* point_fock = point->add_subcommand("fock", "number state |n1,n2>");
  point_fock->add_option("--n1", fock_args.n1, "mode-1 occupation")->required();
  point_fock->add_option("--n2", fock_args.n2, "mode-2 occupation")->required();
  add_point_common(point_fock);

  struct {
    std::string z1 = "0";
    std::string z2 = "0";
    double a = 0.0;
    double b = 0.0;
  } sc_args;
  auto* point_sc = point->add_subcommand(
      "squeezed-coherent", "two-mode squeeze U0(a,b) applied to |z1,z2>");
  point_sc->add_option("--z1", sc_args.z1, "mode-1 displacement, e.g. 1+0.5i or 1,0.5");
  point_sc->add_option("--z2", sc_args.z2, "mode-2 displacement");
  point_sc->add_option("--a", sc_args.a, "squeeze-plane coordinate a");
  point_sc->add_option("--b", sc_args.b, "squeeze-plane coordinate b");
  add_point_common(point_sc);

  struct {
    double beta = 1.0;
    double a = 0.0;
    double b = 0.0;
  } st_args;
  auto* point_st = point->add_subcommand(
      "squeezed-thermal", "two-mode squeeze applied to a thermal state");
  point_st->add_option("--beta", st_args.beta, "inverse temperature (> 0)");
  point_st->add_option("--a", st_args.a, "squeeze-plane coordinate a");
  point_st->add_option("--b", st_args.b, "squeeze-plane coordinate b");
  add_point_common(point_st);

  struct {
    double u1 = 0.0;
    double u2 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double r = 1.0;
    double eta = 0.0;
  } cs_args;
  auto* point_cs = point->add_subcommand(
      "superposition", "|u1,u2> + r e^{i eta} |v1,v2> with real amplitudes");
  point_cs->add_option("--u1", cs_args.u1, "first-branch mode-1 amplitude");
  point_cs->add_option("--u2", cs_args.u2, "first-branch mode-2 amplitude");
  point_cs->add_option("--v1", cs_args.v1, "second-branch mode-1 amplitude");
  point_cs->add_option("--v2", cs_args.v2, "second-branch mode-2 amplitude");
  point_cs->add_option("--r", cs_args.r, "second-branch weight (>= 0)");
  point_cs->add_option("--eta", cs_args.eta, "relative phase");
  add_point_common(point_cs);

  // ---- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "evaluate Q over a parameter grid");
  std::string sweep_family;
  std::string preset_name;
  std::vector<std::string> fixed_kv;
  std::vector<std::string> axis_specs;
  std::string output_path;
  std::string format_name = "csv";
  std::optional<int> sweep_n_max;
  bool sweep_cross_check = false;
  sweep->add_option("family", sweep_family,
                    "squeezed-coherent | squeezed-thermal | superposition");
  sweep->add_option("--preset", preset_name, preset_help());
  sweep->add_option("--set", fixed_kv, "fixed parameter NAME=VALUE (repeatable)");
  sweep->add_option("--axis", axis_specs, "swept axis NAME=MIN:MAX:STEPS (repeatable, 1-2)");
  sweep->add_option("-o,--output", output_path, "output path (default: stdout)");
  sweep->add_option("--format", format_name, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--n-max", sweep_n_max,
                    "per-mode cutoff forcing the truncated-operator path at every point");
  sweep->add_flag("--cross-check", sweep_cross_check,
                  "cross-check every grid point against the family closed form");

  // ---- custom --------------------------------------------------------------
  auto* custom = app.add_subcommand("custom", "Q for a density matrix from a text file");
  std::string density_path;
  custom->add_option("file", density_path, "density-matrix text file")->required();

  // ---- validate ------------------------------------------------------------
  auto* validate = app.add_subcommand(
      "validate", "compare a family closed form against the truncated-operator oracle");
  ValidateRequest validate_request;
  std::optional<int> validate_n_max;
  validate
      ->add_option("family", validate_request.family,
                   "fock | squeezed-coherent | squeezed-thermal | superposition")
      ->required();
  validate->add_option("--points", validate_request.points,
                       "random parameter points (ignored for fock)");
  validate->add_option("--directions", validate_request.directions,
                       "sphere directions per point");
  validate->add_option("--max-n", validate_request.max_n,
                       "fock: highest occupation per mode");
  validate->add_option("--tolerance", validate_request.tolerance,
                       "|closed form - oracle| admitted as match");
  validate->add_option("--seed", validate_request.seed, "random-parameter seed");
  validate->add_option("--ledger", validate_request.ledger_path,
                       "write the per-evaluation CSV report here");
  validate->add_option("--n-max", validate_n_max, "oracle cutoff override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  return mandelq::cli::run_guarded([&]() -> int {
    if (point->parsed()) {
      mandelq::TwoModeState state;
      if (point_fock->parsed()) {
        state = mandelq::Fock{fock_args.n1, fock_args.n2};
      } else if (point_sc->parsed()) {
        state = mandelq::SqueezedCoherent{mandelq::cli::parse_complex(sc_args.z1),
                                          mandelq::cli::parse_complex(sc_args.z2),
                                          sc_args.a, sc_args.b};
      } else if (point_st->parsed()) {
        state = mandelq::SqueezedThermal{st_args.beta, st_args.a, st_args.b};
      } else {
        state = mandelq::CoherentSuperposition{cs_args.u1, cs_args.u2, cs_args.v1,
                                               cs_args.v2, cs_args.r, cs_args.eta};
      }
      return mandelq::cli::run_point(state, mandelq::cli::resolve_n_max(point_n_max),
                                     !point_no_cross_check, std::cout);
    }
    if (sweep->parsed()) {
      mandelq::cli::SweepSpec spec;
      if (!preset_name.empty() && !sweep_family.empty()) {
        throw mandelq::ValidationError("give either a sweep family or --preset, not both");
      }
      if (!preset_name.empty()) {
        spec = mandelq::cli::preset_sweep(preset_name);
      } else if (!sweep_family.empty()) {
        spec.family = sweep_family;
      } else {
        throw mandelq::ValidationError("sweep needs a family argument or --preset");
      }
      for (const std::string& kv : fixed_kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw mandelq::ParseError("fixed parameter '" + kv + "' is not NAME=VALUE");
        }
        spec.fixed[kv.substr(0, eq)] = mandelq::cli::parse_real(kv.substr(eq + 1));
      }
      if (!axis_specs.empty()) {
        spec.axes.clear();
        for (const std::string& text : axis_specs) {
          spec.axes.push_back(mandelq::cli::parse_axis(text));
        }
      }
      spec.output = output_path;
      spec.format = format_name == "json" ? mandelq::cli::SweepSpec::Format::Json
                                          : mandelq::cli::SweepSpec::Format::Csv;
      spec.n_max = mandelq::cli::resolve_n_max(sweep_n_max);
      spec.cross_check = sweep_cross_check;
      return mandelq::cli::run_sweep_command(spec, std::cout);
    }
    if (custom->parsed()) {
      return mandelq::cli::run_custom(density_path, std::cout);
    }
    validate_request.n_max = mandelq::cli::resolve_n_max(validate_n_max);
    return mandelq::cli::run_validate(validate_request, std::cout);
  });
}
