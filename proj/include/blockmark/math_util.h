// Copyright 2026 The blockmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLOCKMARK_MATH_UTIL_H_
#define BLOCKMARK_MATH_UTIL_H_

#include <cmath>
#include <cstddef>

namespace blockmark {

// ceil(rate * n), ignoring representation error in the product
// (0.3 * 10 is 3, not 4).
inline size_t CeilScaled(double rate, size_t n) {
  const double x = rate * static_cast<double>(n);
  return static_cast<size_t>(std::ceil(x - 1e-9 * std::fmax(1.0, x)));
}

}  // namespace blockmark

#endif  // BLOCKMARK_MATH_UTIL_H_
