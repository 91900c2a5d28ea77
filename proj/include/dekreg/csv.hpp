#pragma once

#include <string>
#include <vector>

#include "dekreg/dataset.hpp"

namespace dekreg {

/// Parse a two-column numeric CSV with a header row. The header must name
/// one of the accepted column pairs (e.g. {"x","y"} or {"time","volume"}).
/// Throws InputError carrying the 1-based line number on malformed input.
Dataset parse_xy_csv(const std::string& text,
                     const std::vector<std::pair<std::string, std::string>>& accepted_headers);

Dataset read_xy_csv(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& accepted_headers);

/// Header line followed by one "x,y" row per observation at 17 significant
/// digits, LF line endings.
std::string dataset_to_csv(const Dataset& data, const std::string& x_name, const std::string& y_name);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace dekreg
