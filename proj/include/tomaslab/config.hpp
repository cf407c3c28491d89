#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tomaslab/exponents.hpp"

namespace tomaslab {

enum class ParamType { Integer, Real, Rational, Text, Flag, RealList, IntList };

/// std::monostate marks an `auto` value still to be resolved by the experiment.
using ParamValue = std::variant<std::monostate, std::int64_t, double, Rational, std::string, bool,
                                std::vector<double>, std::vector<std::int64_t>>;

struct ParamSpec {
  std::string key;
  ParamType type;
  std::string fallback;  ///< default, in command-line spelling
  std::string help;
  bool allow_auto = false;
};

struct Schema {
  std::string subcommand;
  std::string summary;
  std::vector<ParamSpec> params;
};

/// Invalid configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<Schema>& schemas();
/// Throws ConfigError for unknown subcommands.
const Schema& schema_for(const std::string& subcommand);
std::string schema_listing(const Schema& schema);
std::string schema_listing();

/// Parses command-line spelling: lists are comma separated, reals accept
/// `inf`, flags accept true/false/1/0/yes/no.
ParamValue parse_value(const ParamSpec& spec, const std::string& text);
std::string format_value(const ParamValue& value);

struct ExperimentConfig {
  std::string subcommand;
  std::map<std::string, ParamValue> params;
  std::filesystem::path output_dir = "results";
  std::uint64_t seed = 0;

  bool is_auto(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  double real(const std::string& key) const;  ///< Real or Rational
  Rational rational(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::vector<double>& reals(const std::string& key) const;
  const std::vector<std::int64_t>& integers(const std::string& key) const;
  void set(const std::string& key, ParamValue value);
};

/// Validates every key against the schema, then fills in defaults.
ExperimentConfig make_config(const std::string& subcommand, const std::map<std::string, std::string>& given,
                             std::filesystem::path output_dir = "results", std::uint64_t seed = 0);

/// `key = value` lines in schema order, then output directory and seed.
std::string echo(const ExperimentConfig& config);

}  // namespace tomaslab
