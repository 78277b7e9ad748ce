#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace repopulse {

std::optional<std::string> read_file(const std::string& path);

// Write-temp-then-rename so readers never observe a partial file.
void atomic_write_file(const std::string& path, std::string_view bytes);

void ensure_directory(const std::string& path);

} // namespace repopulse
