// SPDX-License-Identifier: Apache-2.0
//
// mcvst: MIMO-OFDM contextual video transmission link simulator
// Copyright (C) 2026 The mcvst authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace mcvst {

// Numeric values are part of the C ABI (see include/mcvst/mcvst.h).
enum class ErrorCode : int {
    InvalidArgument = 1,
    InvalidConfig = 2,
    InvalidInput = 3,
    InvalidParams = 4,
    InvalidRefs = 5,
    RankDeficient = 6,
    Ordering = 7,
    Capacity = 8,
    Encoding = 9,
    Decoding = 10,
    Io = 11,
    SelftestFailed = 12,
    Internal = 13,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Stream-indexed failure from transmit_equalize.
class RankDeficientError : public Error {
public:
    RankDeficientError(std::size_t stream, const std::string& message)
        : Error(ErrorCode::RankDeficient, message), stream_(stream) {}

    std::size_t stream() const noexcept { return stream_; }

private:
    std::size_t stream_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message)
{
    if (!condition)
        throw Error(code, message);
}

} // namespace mcvst
