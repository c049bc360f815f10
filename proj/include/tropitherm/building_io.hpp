#pragma once

#include "tropitherm/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace tropitherm {

/// Parses a building document. Zone gains may be explicit 24-value arrays or
/// a `default` block expanded with `default_gain_schedule`. Throws InputError
/// naming the JSON path of the first offending field.
BuildingModel building_from_json(const nlohmann::json& doc);

/// Writes every field explicitly; `building_from_json(building_to_json(m))`
/// reproduces `m`.
nlohmann::json building_to_json(const BuildingModel& model);

BuildingModel load_building(const std::filesystem::path& path);
void save_building(const BuildingModel& model, const std::filesystem::path& path);

/// Reads a JSON document from disk, mapping I/O and syntax errors to InputError.
nlohmann::json read_json(const std::filesystem::path& path);

RoofType roof_type_from_string(const std::string& text);
StructureClass structure_class_from_string(const std::string& text);

} // namespace tropitherm
