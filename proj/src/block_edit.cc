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

#include "blockmark/block_edit.h"

#include <algorithm>
#include <bit>
#include <string>

#include "blockmark/errors.h"

namespace blockmark {

PackedBlocks::PackedBlocks(int block_size, size_t num_blocks)
    : block_size_(block_size),
      num_blocks_(num_blocks),
      words_per_block_((static_cast<size_t>(block_size) + 63) / 64),
      words_(num_blocks * words_per_block_, 0) {
  if (block_size <= 0) throw ConfigError("block size must be positive");
}

PackedBlocks::PackedBlocks(const BitSequence& bits, int block_size)
    : PackedBlocks(block_size, bits.num_blocks(block_size)) {
  const auto M = static_cast<size_t>(block_size);
  for (size_t i = 0; i < num_blocks_; ++i) {
    auto w = mutable_block(i);
    for (size_t k = 0; k < M; ++k) {
      if (bits[i * M + k]) w[k / 64] |= uint64_t{1} << (k % 64);
    }
  }
}

std::vector<int> BlockEditLastRow(const PackedBlocks& rows,
                                  const PackedBlocks& cols) {
  return BlockEditLastRow(rows, cols, cols.num_blocks());
}

std::vector<int> BlockEditLastRow(const PackedBlocks& rows,
                                  const PackedBlocks& cols, size_t num_cols) {
  if (rows.block_size() != cols.block_size()) {
    throw BlockAlignmentError("block sizes differ");
  }
  if (num_cols > cols.num_blocks()) {
    throw BlockAlignmentError("column count exceeds sequence length");
  }
  const int M = rows.block_size();
  const size_t n1 = rows.num_blocks();
  const size_t n2 = num_cols;
  const size_t W = rows.words_per_block();

  std::vector<int> prev(n2 + 1), cur(n2 + 1);
  for (size_t j = 0; j <= n2; ++j) prev[j] = static_cast<int>(j) * M;

  for (size_t i = 1; i <= n1; ++i) {
    cur[0] = static_cast<int>(i) * M;
    const auto a = rows.block(i - 1);
    for (size_t j = 1; j <= n2; ++j) {
      const auto b = cols.block(j - 1);
      int h = 0;
      for (size_t w = 0; w < W; ++w) h += std::popcount(a[w] ^ b[w]);
      cur[j] = std::min({prev[j] + M, cur[j - 1] + M, prev[j - 1] + h});
    }
    std::swap(prev, cur);
  }
  return prev;
}

int BlockEditDistance(const PackedBlocks& a, const PackedBlocks& b) {
  return BlockEditLastRow(a, b).back();
}

int BlockEditDistance(const BitSequence& a, const BitSequence& b,
                      int block_size) {
  return BlockEditDistance(PackedBlocks(a, block_size),
                           PackedBlocks(b, block_size));
}

double BlockEditRate(const PackedBlocks& a, const PackedBlocks& b) {
  const size_t longer = std::max(a.num_bits(), b.num_bits());
  if (longer == 0) {
    throw BlockAlignmentError("block edit rate of two empty sequences");
  }
  return static_cast<double>(BlockEditDistance(a, b)) /
         static_cast<double>(longer);
}

double BlockEditRate(const BitSequence& a, const BitSequence& b,
                     int block_size) {
  return BlockEditRate(PackedBlocks(a, block_size),
                       PackedBlocks(b, block_size));
}

}  // namespace blockmark
