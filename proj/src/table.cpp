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

#include "spinmech/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinmech/error.hpp"

namespace spinmech {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw Error(ErrorCode::InvalidArgument, "table needs at least one column");
}

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
        throw Error(ErrorCode::InvalidArgument, "row has " + std::to_string(row.size()) + " values, table has " +
                                                    std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    throw Error(ErrorCode::IndexOutOfRange, "no column named '" + name + "'");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
        os << '\n';
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

void Table::write_csv(const std::string& path) const { write_text_file(path, to_csv()); }

}  // namespace spinmech
