// Copyright 2026 The SIDN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIDN_CSV_HPP_
#define SIDN_CSV_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sidn {

// RFC-4180 reader. Quoted fields may span lines; "" is an escaped quote.
struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

struct CsvIssue {
  std::size_t line = 0;
  std::string message;
};

struct CsvTable {
  std::vector<CsvRecord> records;
  std::vector<CsvIssue> issues;
};

CsvTable parse_csv(std::string_view text);

// Quotes the field only when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace sidn

#endif  // SIDN_CSV_HPP_
