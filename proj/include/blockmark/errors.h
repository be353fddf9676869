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

#ifndef BLOCKMARK_ERRORS_H_
#define BLOCKMARK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace blockmark {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// M larger than the embedding dimension, or an embedding of the wrong size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class ExtractionError : public Error {
 public:
  using Error::Error;
};

class SegmentationError : public Error {
 public:
  using Error::Error;
};

// Merge/split index outside the valid range.
class RestructureError : public Error {
 public:
  using Error::Error;
};

// Sentence has no internal whitespace to split on.
class SplitError : public RestructureError {
 public:
  using RestructureError::RestructureError;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Bit sequence length is not a whole number of blocks, or both inputs empty.
class BlockAlignmentError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class MissingCalibrationError : public CalibrationError {
 public:
  using CalibrationError::CalibrationError;
};

// Transport-level failure talking to a backend. Retrying may succeed.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what, bool retryable = true)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// Backend answered, but the answer violates the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class MetricsError : public Error {
 public:
  using Error::Error;
};

}  // namespace blockmark

#endif  // BLOCKMARK_ERRORS_H_
