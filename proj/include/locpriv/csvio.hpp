// Copyright 2026 The locpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOCPRIV_CSVIO_HPP_
#define LOCPRIV_CSVIO_HPP_

#include <string>
#include <vector>

namespace locpriv::csvio {

// 9 significant digits, the fixed precision of every emitted report.
std::string g9(double v);

std::vector<std::string> split(const std::string& line, char delim);

// Whole-file read, split into lines; accepts LF and CRLF. IoError on failure.
std::vector<std::string> read_lines(const std::string& path);

// Joins with LF line endings and a trailing newline; overwrites. IoError.
void write_lines(const std::string& path,
                 const std::vector<std::string>& lines);

}  // namespace locpriv::csvio

#endif  // LOCPRIV_CSVIO_HPP_
