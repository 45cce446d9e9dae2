/*
 * Copyright 2026 The idpgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <istream>
#include <string>
#include <vector>

#include "idpgp/error.hpp"

namespace idpgp::csv {

struct Row {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
// Blank lines are skipped.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    bool next(Row& row) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            strip_cr(line);
            if (first_) {
                first_ = false;
                if (line.rfind("\xEF\xBB\xBF", 0) == 0) {
                    line.erase(0, 3);
                }
            }
            if (line.empty()) {
                continue;
            }
            row.line = line_no_;
            row.fields.clear();
            split(line, row);
            return true;
        }
        return false;
    }

private:
    static void strip_cr(std::string& s) {
        if (!s.empty() && s.back() == '\r') {
            s.pop_back();
        }
    }

    void split(std::string line, Row& row) {
        std::string field;
        bool quoted = false;
        std::size_t i = 0;
        while (true) {
            if (i == line.size()) {
                if (!quoted) {
                    break;
                }
                std::string more;
                if (!std::getline(in_, more)) {
                    fail(ErrorCode::Parse,
                         "line " + std::to_string(row.line) + ": unterminated quoted field");
                }
                ++line_no_;
                strip_cr(more);
                field += '\n';
                line = std::move(more);
                i = 0;
                continue;
            }
            const char c = line[i++];
            if (quoted) {
                if (c == '"') {
                    if (i < line.size() && line[i] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
            } else {
                field += c;
            }
        }
        row.fields.push_back(std::move(field));
    }

    std::istream& in_;
    std::size_t line_no_ = 0;
    bool first_ = true;
};

// Quotes a field only when it needs it.
inline std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace idpgp::csv
