// micromacro: parameter sweeps over the micro-macro entanglement model.
//
//   micromacro visibility --g 1.8 --R 0.1:0.9:9 --k 0,4,8
//   micromacro --config runs/fig4.cfg witness-sigma --format records --out fig4.jsonl
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "micromacro/sweep.hpp"

namespace mm = micromacro;

namespace {

struct GridFlag {
  const char* name;
  const char* help;
};

constexpr GridFlag kGridFlags[] = {
    {"g", "gain values"},
    {"eta", "transmissivities (exclusive with --R)"},
    {"R", "losses 1 - eta (exclusive with --eta)"},
    {"k", "O-Filter thresholds"},
    {"p", "injection probabilities"},
    {"cutoff", "fixed photon-number cutoff (default: smallest meeting --tail-tol)"},
    {"tail-tol", "largest probability mass allowed beyond the cutoff"},
    {"max-cutoff", "budget for automatic cutoffs"},
    {"t", "attenuation parameters (concurrence)"},
    {"N", "photon numbers (separable counterexample)"},
    {"M", "quadrature nodes (separable counterexample)"},
    {"phi", "injected phase"},
    {"n", "photon number (ofilter-dist)"},
    {"basis", "bases HV, RL, +- or phi=<rad> (ofilter-dist)"},
    {"source-basis", "basis of the injected Fock state (ofilter-dist)"},
    {"source", "analytic or numeric conditioned state"},
    {"state", "singlet or separable (witness-ofilter)"},
    {"resolution", "bisection resolution (pcrit)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Micro-macro entanglement sweeps"};
  app.require_subcommand(0, 1);

  std::string config_path;
  mm::RunConfig flags;
  flags.format.clear();
  app.add_option("--config", config_path, "key = value run configuration file");
  app.add_option("--out", flags.out, "output file (default: standard output)");
  app.add_option("--format", flags.format, "csv or records")
      ->check(CLI::IsMember({"csv", "records"}));

  std::map<std::string, std::vector<std::string>> grid_values;
  for (const auto& f : kGridFlags)
    app.add_option(std::string("--") + f.name, grid_values[f.name], f.help)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->allow_extra_args(false);

  for (const auto& name : mm::experiment_names())
    app.add_subcommand(name, "run the " + name + " sweep")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto& [key, values] : grid_values)
    if (!values.empty()) flags.settings[key] = values;
  if (!app.get_subcommands().empty()) flags.experiment = app.get_subcommands().front()->get_name();

  try {
    mm::RunConfig config;
    config.format.clear();
    if (!config_path.empty()) config = mm::RunConfig::from_file(config_path);
    config.merge(flags);

    const mm::SweepTable table = mm::run_experiment(config);
    std::ostringstream buffer;
    mm::write_table(buffer, table, config.format);

    if (config.out.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream out(config.out, std::ios::binary);
      if (!out) throw mm::ConfigError("cannot write '" + config.out + "'");
      out << buffer.str();
    }
    return 0;
  } catch (const mm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mm::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mm::CutoffError& e) {
    std::cerr << "cutoff error: " << e.what() << "\n";
    return 3;
  } catch (const mm::Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
