#include "platelab/commands.hpp"
#include "platelab/config.hpp"
#include "platelab/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace platelab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"platelab: pseudospectral lab for the vibrating plate equation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, output;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config_path, "config file");
    sub->add_option("--output,-o", output, "output directory");
    sub->add_option("settings", overrides, "overrides: key=value or section.key=value");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "run the command named in the config's [run] section");
  add_common(run_cmd);
  for (const std::string& name : known_commands()) add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name() == "run" ? "" : sub->get_name();

  try {
    std::vector<std::string> errors;
    RawConfig raw = config_path.empty() ? RawConfig{} : parse_raw_config(slurp(config_path), errors);
    if (!output.empty()) overrides.push_back("run.output=" + output);
    try {
      apply_overrides(raw, overrides);
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.messages.begin(), e.messages.end());
    }
    const ExperimentConfig cfg = build_config(raw, command, std::move(errors));
    run(cfg, std::cout);
  } catch (const Error& e) {
    std::cerr << error_record(e) << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << error_record(ResourceError(e.what())) << '\n';
    return kExitResource;
  }
  return kExitOk;
}
