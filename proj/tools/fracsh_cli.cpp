#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fracsh/fracsh.hpp"

namespace {

using Runner = std::function<int(const fracsh::StudyConfig&)>;

int run(const Runner& runner, const std::string& config_path, const std::vector<std::string>& overrides, int workers,
        const std::string& out_dir) {
  try {
    fracsh::StudyConfig cfg;
    if (!config_path.empty()) fracsh::apply_config_file(cfg, config_path);
    for (const auto& o : overrides) fracsh::apply_override(cfg, o);
    if (workers > 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return runner(cfg);
  } catch (const fracsh::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return fracsh::kExitValidation;
  } catch (const fracsh::QuadratureError& e) {
    std::cerr << "quadrature failure: " << e.what() << '\n';
    return fracsh::kExitNumeric;
  } catch (const fracsh::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return fracsh::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-spectral studies of the fractional Swift-Hohenberg equation and its amplitude equation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  int workers = 0;
  std::string out_dir;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "override a configuration key (key=value), repeatable");
  app.add_option("--workers", workers, "concurrent per-eps jobs")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");

  const std::map<std::string, std::pair<std::string, Runner>> commands{
      {"symbols", {"Taylor/remainder identity defects and c+ check (symbols.csv)", fracsh::run_symbols}},
      {"gl", {"Ginzburg-Landau trajectory (gl.csv, gl_final.csv)", fracsh::run_gl}},
      {"sh", {"Swift-Hohenberg runs from eps Psi(0), one checkpoint per eps", fracsh::run_sh}},
      {"residuum", {"residuum and nonlinearity-difference eps-scaling", fracsh::run_residuum}},
      {"convergence", {"approximation error eps-scaling", fracsh::run_convergence}},
      {"props", {"randomized estimate and identity checks (props.json)", fracsh::run_props}},
  };
  Runner selected;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->callback([&selected, runner = entry.second] { selected = runner; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fracsh::kExitValidation;
  }
  return run(selected, config_path, overrides, workers, out_dir);
}
