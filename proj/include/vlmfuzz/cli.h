// Copyright 2026 The vlmfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef VLMFUZZ_CLI_H_
#define VLMFUZZ_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>

namespace vlmfuzz {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDevice = 3;

// "90", "90s", "5m", "1h" -> seconds.
std::optional<int64_t> ParseDuration(std::string_view text);

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace vlmfuzz

#endif  // VLMFUZZ_CLI_H_
