#pragma once

// Helpers shared between translation units; not part of the public API.

#include <filesystem>
#include <string>

namespace gvflow::internal {

// Strips surrounding spaces, tabs, and carriage returns.
std::string trim(const std::string& s);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

// Writes content to path.tmp, then renames over path. Throws IoError.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace gvflow::internal
