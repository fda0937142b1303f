// Copyright 2026 The PhyloAdapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHYLOADAPT_TSV_H_
#define PHYLOADAPT_TSV_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace phyloadapt {

// A tab-separated table with a header row. Every data row has exactly as
// many fields as the header.
struct TsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line number of each row, for diagnostics.
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> ColumnIndex(std::string_view name) const;
};

// Reads a table. Throws DataError on a missing header or a row whose
// column count differs from the header's, naming the line number. Blank
// lines are skipped; a trailing '\r' is stripped.
TsvTable ReadTsv(std::istream& in, std::string_view source_name);
TsvTable ReadTsvFile(const std::filesystem::path& path);

// Writes header and rows. Throws DataError if a field contains a tab or a
// newline, since that could not be read back.
void WriteTsv(std::ostream& out, const TsvTable& table);
void WriteTsvFile(const std::filesystem::path& path, const TsvTable& table);

std::vector<std::string> SplitTabs(std::string_view line);

}  // namespace phyloadapt

#endif  // PHYLOADAPT_TSV_H_
