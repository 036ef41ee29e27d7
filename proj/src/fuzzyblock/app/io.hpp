#pragma once

#include <string>
#include <string_view>

namespace fuzzyblock::app {

std::string read_file(const std::string& path);
// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial product.
void write_file_atomic(const std::string& path, std::string_view data);

}  // namespace fuzzyblock::app
