#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "tomaslab/config.hpp"
#include "tomaslab/experiments.hpp"

namespace {

struct Bound {
  CLI::App* app = nullptr;
  std::map<std::string, std::pair<CLI::Option*, std::unique_ptr<std::string>>> options;
  std::string out = "results";
  std::uint64_t seed = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restriction and oscillatory integral lab"};
  app.require_subcommand(1);
  app.footer("Each subcommand writes <out>/<name>.csv and <out>/<name>_verdict.txt.\n"
             "Exit status: 0 pass, 1 fail, 2 invalid configuration.");

  std::map<std::string, Bound> bound;
  for (const auto& schema : tomaslab::schemas()) {
    Bound& b = bound[schema.subcommand];
    b.app = app.add_subcommand(schema.subcommand, schema.summary);
    for (const auto& p : schema.params) {
      auto value = std::make_unique<std::string>();
      auto* opt = b.app->add_option("--" + p.key, *value, p.help + " (default " + p.fallback + ")");
      b.options.emplace(p.key, std::make_pair(opt, std::move(value)));
    }
    b.app->add_option("--out", b.out, "output directory");
    b.app->add_option("--seed", b.seed, "random seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n";
    for (const auto& [name, b] : bound) {
      if (b.app->parsed()) {
        std::cerr << tomaslab::schema_listing(tomaslab::schema_for(name));
        return 2;
      }
    }
    std::cerr << tomaslab::schema_listing();
    return 2;
  }

  for (auto& [name, b] : bound) {
    if (!b.app->parsed()) continue;
    std::map<std::string, std::string> given;
    for (const auto& [key, entry] : b.options) {
      if (entry.first->count() > 0) given[key] = *entry.second;
    }
    try {
      auto config = tomaslab::make_config(name, given, b.out, b.seed);
      return tomaslab::run_experiment(config, std::cout);
    } catch (const tomaslab::ConfigError& e) {
      std::cerr << "invalid configuration: " << e.what() << "\n\n" << tomaslab::schema_listing(tomaslab::schema_for(name));
      return 2;
    }
  }
  return 2;
}
