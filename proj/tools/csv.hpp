#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mnkurt::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180-ish reader: quoted fields, doubled quotes, CRLF. Blank lines and
/// lines starting with '#' are skipped. The first remaining line is the
/// header.
CsvTable read_csv(std::istream& in);

std::string csv_field(std::string_view s);

}  // namespace mnkurt::cli
