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

#ifndef BLOCKMARK_BIT_SEQUENCE_H_
#define BLOCKMARK_BIT_SEQUENCE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace blockmark {

// An ordered sequence of bits. Block structure (M bits per sentence) is not
// stored; block-level accessors take M and reject lengths that are not a
// whole number of blocks.
class BitSequence {
 public:
  BitSequence() = default;
  explicit BitSequence(std::vector<uint8_t> bits);

  // Parses "0110..."; whitespace is ignored.
  static BitSequence FromString(std::string_view s);

  size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  uint8_t operator[](size_t i) const { return bits_[i]; }
  const std::vector<uint8_t>& bits() const { return bits_; }

  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitSequence& other);

  size_t num_blocks(int block_size) const;
  // Block i (0-based) of size `block_size`.
  BitSequence block(size_t i, int block_size) const;
  BitSequence slice(size_t start, size_t count) const;

  std::string ToString() const;

  friend bool operator==(const BitSequence&, const BitSequence&) = default;

 private:
  std::vector<uint8_t> bits_;
};

// Number of differing positions. Lengths must agree.
int hamming(const BitSequence& a, const BitSequence& b);

}  // namespace blockmark

#endif  // BLOCKMARK_BIT_SEQUENCE_H_
