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

#ifndef BLOCKMARK_BLOCK_EDIT_H_
#define BLOCKMARK_BLOCK_EDIT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blockmark/bit_sequence.h"

namespace blockmark {

// Bit sequence stored as ceil(M / 64) words per block, so block Hamming
// distance is a handful of popcounts.
class PackedBlocks {
 public:
  PackedBlocks(int block_size, size_t num_blocks);
  // Throws BlockAlignmentError if bits.size() is not a multiple of
  // block_size.
  PackedBlocks(const BitSequence& bits, int block_size);

  int block_size() const { return block_size_; }
  size_t num_blocks() const { return num_blocks_; }
  size_t words_per_block() const { return words_per_block_; }
  size_t num_bits() const {
    return num_blocks_ * static_cast<size_t>(block_size_);
  }

  std::span<const uint64_t> block(size_t i) const {
    return {words_.data() + i * words_per_block_, words_per_block_};
  }
  std::span<uint64_t> mutable_block(size_t i) {
    return {words_.data() + i * words_per_block_, words_per_block_};
  }

 private:
  int block_size_;
  size_t num_blocks_;
  size_t words_per_block_;
  std::vector<uint64_t> words_;
};

// Bottom row of the block edit table between `rows` and `cols`: entry j is
// the distance between all of `rows` and the first j blocks of `cols`.
// Insertion and deletion of a block cost M; substitution costs the block
// Hamming distance. Block sizes must agree.
std::vector<int> BlockEditLastRow(const PackedBlocks& rows,
                                  const PackedBlocks& cols);
// Same, restricted to the first `num_cols` blocks of `cols`.
std::vector<int> BlockEditLastRow(const PackedBlocks& rows,
                                  const PackedBlocks& cols, size_t num_cols);

int BlockEditDistance(const PackedBlocks& a, const PackedBlocks& b);
int BlockEditDistance(const BitSequence& a, const BitSequence& b,
                      int block_size);

// Distance divided by the longer sequence's bit length; in [0, 1] and
// symmetric. Throws BlockAlignmentError when a length is not a multiple of
// block_size or both inputs are empty.
double BlockEditRate(const BitSequence& a, const BitSequence& b,
                     int block_size);
double BlockEditRate(const PackedBlocks& a, const PackedBlocks& b);

}  // namespace blockmark

#endif  // BLOCKMARK_BLOCK_EDIT_H_
