// ldg <mode> --config <path> [--out <path>]
//
// Exit codes: 0 success, 1 runtime failure, 2 config error, 3 blow-up.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ldg/ldg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;

int run(const std::string& mode, const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "ldg: cannot read config '" << config_path << "'\n";
    return kExitConfig;
  }
  std::stringstream text;
  text << in.rdbuf();

  ldg::RunConfig cfg;
  try {
    cfg = ldg::parse_config(text.str());
    cfg.mode = mode;
    ldg::resolve_problem(cfg);
  } catch (const ldg::ConfigError& e) {
    std::cerr << "ldg: " << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const ldg::InputError& e) {
    std::cerr << "ldg: " << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  }
  for (const auto& w : cfg.warnings) std::cerr << "ldg: warning: " << w << '\n';

  const std::string target = !out_path.empty() ? out_path : cfg.output;
  try {
    if (target.empty() || target == "-") {
      ldg::run_mode(cfg, std::cout);
    } else {
      std::ostringstream buf;
      ldg::run_mode(cfg, buf);
      std::ofstream out(target, std::ios::binary);
      if (!out) {
        std::cerr << "ldg: cannot write '" << target << "'\n";
        return kExitFailure;
      }
      out << buf.str();
    }
  } catch (const ldg::BlowUpError& e) {
    std::cerr << "ldg: blow-up at t = " << e.time() << " (max |coeff| = " << e.max_norm() << "): " << e.what() << '\n';
    return kExitBlowUp;
  } catch (const ldg::InputError& e) {
    std::cerr << "ldg: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ldg: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D LDG solver for convection-diffusion systems"};
  std::string mode;
  std::string config_path;
  std::string out_path;
  app.add_option("mode", mode, "run | convergence | projtest | fluxtest | history")
      ->required()
      ->check(CLI::IsMember({"run", "convergence", "projtest", "fluxtest", "history"}));
  app.add_option("--config", config_path, "key = value configuration file")->required();
  app.add_option("--out", out_path, "CSV output path (default: config 'output', else stdout)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  return run(mode, config_path, out_path);
}
