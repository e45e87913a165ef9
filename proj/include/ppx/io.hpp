#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ppx {

// Numeric formatting used in every CSV and report: printf "%.12g".
std::string fmt_g12(double value);

// Joins cells with commas; no quoting (cell content is controlled).
std::string csv_row(const std::vector<std::string>& cells);

// Writes content as-is (UTF-8, LF endings come from the content itself).
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ppx
