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

#include "blockmark/bit_sequence.h"

#include <cctype>

#include "blockmark/errors.h"

namespace blockmark {

BitSequence::BitSequence(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

BitSequence BitSequence::FromString(std::string_view s) {
  BitSequence out;
  for (char c : s) {
    if (c == '0' || c == '1') {
      out.push_back(c == '1');
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw ConfigError("bit string contains '" + std::string(1, c) + "'");
    }
  }
  return out;
}

void BitSequence::append(const BitSequence& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

size_t BitSequence::num_blocks(int block_size) const {
  if (block_size <= 0) throw ConfigError("block size must be positive");
  if (bits_.size() % static_cast<size_t>(block_size) != 0) {
    throw BlockAlignmentError("bit sequence of length " +
                              std::to_string(bits_.size()) +
                              " is not a multiple of block size " +
                              std::to_string(block_size));
  }
  return bits_.size() / static_cast<size_t>(block_size);
}

BitSequence BitSequence::block(size_t i, int block_size) const {
  if (i >= num_blocks(block_size)) {
    throw BlockAlignmentError("block index out of range");
  }
  return slice(i * static_cast<size_t>(block_size),
               static_cast<size_t>(block_size));
}

BitSequence BitSequence::slice(size_t start, size_t count) const {
  if (start > bits_.size() || count > bits_.size() - start) {
    throw BlockAlignmentError("slice out of range");
  }
  BitSequence out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(start),
                   bits_.begin() + static_cast<std::ptrdiff_t>(start + count));
  return out;
}

std::string BitSequence::ToString() const {
  std::string s;
  s.reserve(bits_.size());
  for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

int hamming(const BitSequence& a, const BitSequence& b) {
  if (a.size() != b.size()) {
    throw BlockAlignmentError("hamming distance of unequal lengths");
  }
  int d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace blockmark
