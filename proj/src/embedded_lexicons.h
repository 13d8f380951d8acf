// Copyright 2026 The aigtkit Authors.
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

#ifndef AIGT_SRC_EMBEDDED_LEXICONS_H_
#define AIGT_SRC_EMBEDDED_LEXICONS_H_

#include <cstddef>

namespace aigt::detail {

struct EmbeddedFile {
  const char* name;
  const char* data;
};

// Generated at build time from data/lexicons.
extern const EmbeddedFile kEmbeddedLexicons[];
extern const std::size_t kEmbeddedLexiconCount;

}  // namespace aigt::detail

#endif  // AIGT_SRC_EMBEDDED_LEXICONS_H_
