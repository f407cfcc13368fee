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

#include "common/error.hpp"

namespace mcvst {

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::InvalidConfig: return "invalid_config";
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::InvalidParams: return "invalid_params";
    case ErrorCode::InvalidRefs: return "invalid_refs";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::Ordering: return "ordering";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::Encoding: return "encoding";
    case ErrorCode::Decoding: return "decoding";
    case ErrorCode::Io: return "io";
    case ErrorCode::SelftestFailed: return "selftest_failed";
    case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

} // namespace mcvst
