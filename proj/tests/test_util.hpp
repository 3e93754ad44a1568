// Copyright 2026 The groundcheck Authors
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

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "groundcheck/error.hpp"
#include "groundcheck/simsearch.hpp"

namespace testutil {

// Code of the groundcheck::Error thrown by fn, or kInternal when none is.
template <typename Fn>
groundcheck::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const groundcheck::Error& e) {
    return e.code();
  }
  return groundcheck::ErrorCode::kInternal;
}

inline groundcheck::EmbeddingStore store(std::size_t dim, std::vector<std::string> ids,
                                         std::vector<double> data) {
  return groundcheck::EmbeddingStore(dim, std::move(ids), std::move(data));
}

}  // namespace testutil
