// Copyright 2026 The replaydf-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "json_config.hpp"

#include "json.hpp"

namespace replaydf::cli {
namespace {

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

CLI::ConfigItem make_item(std::vector<std::string> parents, const std::string& name,
                          const nlohmann::json& value) {
  CLI::ConfigItem item;
  item.parents = std::move(parents);
  item.name = name;
  if (value.is_array()) {
    for (const auto& v : value) item.inputs.push_back(scalar_text(v));
  } else {
    item.inputs.push_back(scalar_text(value));
  }
  return item;
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool,
                                  std::string) const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : app->get_options({})) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string name = opt->get_lnames()[0];
    if (opt->get_type_size() != 0) {
      if (opt->count() == 1) {
        j[name] = opt->results().at(0);
      } else if (opt->count() > 1) {
        j[name] = opt->results();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    } else if (opt->count() > 0) {
      j[name] = true;
    }
  }
  for (const CLI::App* sub : app->get_subcommands({})) {
    const auto nested = nlohmann::ordered_json::parse(to_config(sub, default_also, false, ""));
    if (!nested.empty()) j[sub->get_name()] = nested;
  }
  return j.dump(2);
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(input);
  } catch (const nlohmann::json::parse_error& e) {
    throw CLI::ConversionError(std::string("config file: ") + e.what());
  }
  if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
  std::vector<CLI::ConfigItem> items;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      for (const auto& [sub_key, sub_value] : value.items()) {
        items.push_back(make_item({key}, sub_key, sub_value));
      }
    } else if (globals_.contains(key) || section_.empty()) {
      items.push_back(make_item({}, key, value));
    } else {
      items.push_back(make_item({section_}, key, value));
    }
  }
  return items;
}

}  // namespace replaydf::cli
