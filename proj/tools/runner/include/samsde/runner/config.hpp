// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace samsde::runner {

using Json = nlohmann::ordered_json;

/// A config problem tied to one field, e.g. "params.rho".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ParamType { number, integer, boolean, string, numbers, strings };

std::string_view to_string(ParamType t);

/// Default value of a parameter, given the parameters resolved so far (in
/// declaration order) and whether paper-scale sizes were requested.
using DefaultFn = std::function<Json(const Json& resolved, bool paper_scale)>;

struct ParamSpec {
  std::string name;
  ParamType type;
  DefaultFn fallback;
  std::string help;
};

/// Constant default, the same at both scales.
DefaultFn fixed(Json value);
/// Different defaults at desk scale and paper scale.
DefaultFn scaled(Json desk, Json paper);

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::int64_t threads = 0;
  std::string out = "out";
  bool paper_scale = false;
  Json params = Json::object();
};

/// Checks the top-level shape. Unknown keys and wrong types raise ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Type-checks the explicit params against `schema` and fills the rest from
/// the defaults. Explicit values always win over scale-dependent defaults.
Json resolve_params(const Json& given, const std::vector<ParamSpec>& schema, bool paper_scale);

Json to_json(const ExperimentConfig& cfg);

/// Typed accessors on resolved params.
double get_number(const Json& p, const std::string& key);
std::int64_t get_integer(const Json& p, const std::string& key);
bool get_bool(const Json& p, const std::string& key);
std::string get_string(const Json& p, const std::string& key);
std::vector<double> get_numbers(const Json& p, const std::string& key);
std::vector<std::string> get_strings(const Json& p, const std::string& key);

}  // namespace samsde::runner
