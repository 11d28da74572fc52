#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kbp::io {

/// Calls fn(json, line_number) for every non-blank line. Parse failures throw
/// ParseError naming the file and the 1-based line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename, so readers never observe a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string to_jsonl(const std::vector<nlohmann::json>& rows);

}  // namespace kbp::io
