// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/runner/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace samsde::runner {

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

std::string_view to_string(ParamType t) {
  switch (t) {
    case ParamType::number:
      return "number";
    case ParamType::integer:
      return "integer";
    case ParamType::boolean:
      return "boolean";
    case ParamType::string:
      return "string";
    case ParamType::numbers:
      return "array of numbers";
    case ParamType::strings:
      return "array of strings";
  }
  return "?";
}

DefaultFn fixed(Json value) {
  return [v = std::move(value)](const Json&, bool) { return v; };
}

DefaultFn scaled(Json desk, Json paper) {
  return [d = std::move(desk), p = std::move(paper)](const Json&, bool paper_scale) {
    return paper_scale ? p : d;
  };
}

namespace {

std::string type_name(const Json& v) {
  if (v.is_number_integer()) return "integer";
  if (v.is_number_float()) return "number";
  return v.type_name();
}

// Integers may be spelled 1e4 in a config; accept any float with an exact
// integral value.
bool integral(const Json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double x = v.get<double>();
  return std::isfinite(x) && std::floor(x) == x && std::abs(x) < 9.0e15;
}

Json normalise(const Json& v, ParamType t, const std::string& field) {
  auto fail = [&](const char* want) {
    throw ConfigError(field, std::string("expected ") + want + ", got " + type_name(v));
  };
  switch (t) {
    case ParamType::number:
      if (!v.is_number()) fail("a number");
      return v.get<double>();
    case ParamType::integer:
      if (!integral(v)) fail("an integer");
      return v.is_number_float() ? Json(static_cast<std::int64_t>(v.get<double>())) : v;
    case ParamType::boolean:
      if (!v.is_boolean()) fail("a boolean");
      return v;
    case ParamType::string:
      if (!v.is_string()) fail("a string");
      return v;
    case ParamType::numbers: {
      if (!v.is_array()) fail("an array of numbers");
      Json out = Json::array();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
          throw ConfigError(field + "[" + std::to_string(i) + "]",
                            "expected a number, got " + type_name(v[i]));
        }
        out.push_back(v[i].get<double>());
      }
      return out;
    }
    case ParamType::strings: {
      if (!v.is_array()) fail("an array of strings");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) {
          throw ConfigError(field + "[" + std::to_string(i) + "]",
                            "expected a string, got " + type_name(v[i]));
        }
      }
      return v;
    }
  }
  return v;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected an object, got " + type_name(j));
  ExperimentConfig cfg;
  bool have_kind = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "experiment") {
      if (!v.is_string()) throw ConfigError(key, "expected a string, got " + type_name(v));
      cfg.experiment = v.get<std::string>();
      have_kind = true;
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(key, "expected a non-negative integer, got " + type_name(v));
      }
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "threads") {
      if (!integral(v) || v.get<double>() < 0) {
        throw ConfigError(key, "expected a non-negative integer, got " + type_name(v));
      }
      cfg.threads = static_cast<std::int64_t>(v.get<double>());
    } else if (key == "out") {
      if (!v.is_string()) throw ConfigError(key, "expected a string, got " + type_name(v));
      cfg.out = v.get<std::string>();
    } else if (key == "paper_scale") {
      if (!v.is_boolean()) throw ConfigError(key, "expected a boolean, got " + type_name(v));
      cfg.paper_scale = v.get<bool>();
    } else if (key == "params") {
      if (!v.is_object()) throw ConfigError(key, "expected an object, got " + type_name(v));
      cfg.params = v;
    } else {
      throw ConfigError(key, "unknown key (expected experiment, seed, threads, out, "
                             "paper_scale or params)");
    }
  }
  if (!have_kind) throw ConfigError("experiment", "missing");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    throw ConfigError("<file>", std::string("JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

Json resolve_params(const Json& given, const std::vector<ParamSpec>& schema, bool paper_scale) {
  for (const auto& [key, v] : given.items()) {
    bool known = false;
    for (const auto& s : schema) known = known || s.name == key;
    if (!known) throw ConfigError("params." + key, "unknown parameter");
  }
  Json out = Json::object();
  for (const auto& s : schema) {
    const std::string field = "params." + s.name;
    if (given.contains(s.name)) {
      out[s.name] = normalise(given.at(s.name), s.type, field);
    } else {
      out[s.name] = normalise(s.fallback(out, paper_scale), s.type, field);
    }
  }
  return out;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j = Json::object();
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  j["paper_scale"] = cfg.paper_scale;
  j["params"] = cfg.params;
  return j;
}

double get_number(const Json& p, const std::string& key) { return p.at(key).get<double>(); }

std::int64_t get_integer(const Json& p, const std::string& key) {
  return p.at(key).get<std::int64_t>();
}

bool get_bool(const Json& p, const std::string& key) { return p.at(key).get<bool>(); }

std::string get_string(const Json& p, const std::string& key) {
  return p.at(key).get<std::string>();
}

std::vector<double> get_numbers(const Json& p, const std::string& key) {
  return p.at(key).get<std::vector<double>>();
}

std::vector<std::string> get_strings(const Json& p, const std::string& key) {
  return p.at(key).get<std::vector<std::string>>();
}

}  // namespace samsde::runner
