#pragma once

#include <filesystem>
#include <string>

#include "record.hpp"

namespace tsc {

enum class Format { Csv, RawF32 };

Format format_from_string(const std::string& name);
// .csv -> Csv, anything else -> RawF32.
Format detect_format(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, Format format);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path, Format format);

// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);
int parse_int(const std::string& text);

}  // namespace tsc
