// Copyright 2026 The Synbench Authors
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

#ifndef SYNBENCH_SRC_CSV_H_
#define SYNBENCH_SRC_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace synbench::csv {

using Row = std::vector<std::string>;

// RFC-4180 records: comma separated, double-quote escaping, CRLF or LF line
// endings, quoted fields may span lines. A leading UTF-8 BOM is skipped and
// blank lines are dropped.
std::vector<Row> Parse(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string EscapeField(std::string_view field);
std::string FormatRow(const Row& row);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Shortest representation that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace synbench::csv

#endif  // SYNBENCH_SRC_CSV_H_
