#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace gpl {

/// Decimal with 17 significant digits, "C" locale; nan/inf spelled as such.
std::string format_double(double x);

/// JSON text whose floating-point numbers carry 17 significant digits.
/// Non-finite numbers become null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace gpl
