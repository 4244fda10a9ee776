// Copyright 2026 The spinmech Authors
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

// Plot-ready result tables: header row, then one record per line, every
// number written with 12 significant digits.
#pragma once

#include <string>
#include <vector>

namespace spinmech {

class Table {
public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<double> row);

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
    double at(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }
    std::size_t column_index(const std::string& name) const;

    std::string to_csv() const;
    void write_csv(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

std::string format_number(double v);

/// Writes `text` to `path`, throwing ErrorCode::Io on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace spinmech
