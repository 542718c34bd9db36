// Copyright 2026 The GAM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// gam: command-line front end over the libgam C API.
//
//   gam synth --out data/ --seed 3
//   gam cv --config run.json --method agg-wl --folds 5
//
// Every config key is also a flag (underscores become dashes); flags win
// over values read from --config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gam/gam.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

constexpr int kUsage = 1;

struct Owned {
  char* p = nullptr;
  ~Owned() { gam_string_free(p); }
};

json defaults() {
  Owned s;
  if (gam_config_resolve("{}", &s.p) != GAM_OK) throw std::runtime_error(gam_last_error());
  return json::parse(s.p);
}

std::string flag_name(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return "--" + key;
}

// Converts a flag string to the JSON type of the key's default value.
json coerce(const std::string& key, const std::string& text, const json& like) {
  try {
    if (like.is_boolean()) {
      if (text == "true" || text == "1" || text == "on") return true;
      if (text == "false" || text == "0" || text == "off") return false;
      throw std::invalid_argument("expected true or false");
    }
    if (like.is_number_unsigned() || like.is_number_integer()) {
      if (!text.empty() && text[0] == '-') throw std::invalid_argument("expected a non-negative integer");
      std::size_t used = 0;
      const unsigned long long v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument("expected an integer");
      return v;
    }
    if (like.is_number()) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("expected a number");
      return v;
    }
    if (like.is_array()) {
      json arr = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) arr.push_back(coerce(key, item, 0u));
      return arr;
    }
    return text;
  } catch (const std::exception& e) {
    throw CLI::ValidationError(flag_name(key), text + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  json base;
  try {
    base = defaults();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }

  CLI::App app{"Graph attention agents: data generation, training and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gam_version()));

  const std::map<std::string, std::string> help = {
      {"synth", "generate the synthetic pattern dataset"},
      {"train", "train a GAM or GAM-mem model on a whole dataset"},
      {"eval", "evaluate a saved model"},
      {"cv", "stratified k-fold cross validation"},
      {"trace", "rank vector after a probe step, per saved checkpoint"},
      {"study", "cross validation over a list of walk lengths"},
      {"partial", "baseline accuracy on full graphs vs random-walk views"},
  };

  std::string config_path;
  std::map<std::string, std::string> flag_values;
  std::string command;
  for (const auto& [name, text] : help) {
    CLI::App* sub = app.add_subcommand(name, text);
    sub->add_option("--config", config_path, "JSON config file");
    for (const auto& [key, value] : base.items()) {
      std::string desc = "config key '" + key + "' (default " + value.dump() + ")";
      sub->add_option(flag_name(key), flag_values[key], desc);
    }
    sub->callback([&command, n = name] { command = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  json cfg = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << config_path << "'\n";
      return kUsage;
    }
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      std::cerr << "error: config '" << config_path << "': " << e.what() << '\n';
      return kUsage;
    }
  }
  try {
    CLI::App* sub = app.get_subcommand(command);
    for (const auto& [key, value] : base.items())
      if (sub->count(flag_name(key)) > 0) cfg[key] = coerce(key, flag_values[key], value);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  Owned manifest;
  const gam_status st = gam_run(command.c_str(), cfg.dump().c_str(), &manifest.p);
  if (st != GAM_OK) {
    std::cerr << "error: " << gam_last_error() << '\n';
    return static_cast<int>(st);
  }
  std::cout << manifest.p << '\n';
  return 0;
}
