#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mo/cli/commands.hpp"

namespace {

struct Args {
  std::string config, out, certificate;
  mo::cli::Overrides o;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Args& a) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", a.config, "config file (JSON)")->required();
  sub->add_option("--out", a.out, "report file; stdout when absent");
  sub->add_option("--seed", a.o.seed, "seed for sampling and generators");
  sub->add_option("--samples", a.o.samples, "sample budget");
  sub->add_option("--tol", a.o.tol, "tolerance of iterative norms");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, duals and Daugavet classification of Musielak-Orlicz spaces on finite grids"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mo::cli::kVersion);
  Args a;
  add_command(app, "norm", "norms of x", a);
  add_command(app, "classify", "Daugavet classification with verified witness", a);
  add_command(app, "probe", "geometry probes listed in the config", a);
  add_command(app, "conjugate", "complementary curves or Koethe dual weights", a);
  add_command(app, "verify", "re-verify the witness in a classify report", a)
      ->add_option("--certificate", a.certificate, "report written by classify")
      ->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mo::cli::kParseError;
  }

  const auto start = std::chrono::steady_clock::now();
  const std::string command = app.get_subcommands().front()->get_name();
  const mo::cli::Outcome r = mo::cli::run_command(command, a.config, a.certificate, a.o);
  if (!r.report.is_null()) {
    const std::string text = mo::cli::render(r.report);
    if (a.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(a.out, std::ios::binary);
      f << text;
      if (!f) {
        std::cerr << "mocli: error: cannot write " << a.out << "\n";
        return mo::cli::kFailure;
      }
    }
  }
  if (!r.error.empty()) std::cerr << "mocli: error: " << r.error << "\n";
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "mocli: %s exit %d, wall time %.3f s\n", command.c_str(), r.exit_code, secs);
  return r.exit_code;
}
