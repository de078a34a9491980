// Copyright 2026 The percspin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERCSPIN_IO_HPP
#define PERCSPIN_IO_HPP

#include <cstdint>
#include <string>

namespace percspin {

// Shortest decimal string that round-trips to the same double. Infinities
// print as "inf"/"-inf" so CSV cells stay locale-free and reproducible.
std::string format_number(double value);
std::string format_number(std::int64_t value);
std::string format_number(std::uint64_t value);
inline std::string format_number(int value) {
  return format_number(static_cast<std::int64_t>(value));
}

}  // namespace percspin

#endif  // PERCSPIN_IO_HPP
