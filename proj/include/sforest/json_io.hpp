#pragma once

#include <string>

#include "sforest/run.hpp"

namespace sforest {

// Numbers are emitted with 17 significant digits so load(save(x)) == x
// bit-exactly; parsing goes through nlohmann::json. All parse/shape errors
// surface as ValidationError.

std::string map_to_json(const Scenario& sc);
Scenario map_from_json(const std::string& text);

std::string policy_to_string(const StopPolicy& p);
StopPolicy policy_from_string(const std::string& text);

std::string result_to_json(const ResultDocument& doc);
ResultDocument result_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sforest
