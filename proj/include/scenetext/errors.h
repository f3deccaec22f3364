// Copyright 2026 The Scenetext Authors.
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

#ifndef SCENETEXT_ERRORS_H_
#define SCENETEXT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scenetext {

// Malformed JSON. `byte_offset` points into the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Well-formed JSON that does not satisfy the record schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (wrong answer count, empty
// reference list, too few items for a corpus statistic).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid configuration: unknown objective, fraction out of range, etc.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A record cannot produce an example for the requested objective.
class IneligibleRecord : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Predictions and references do not line up on example_id.
class AlignmentError : public std::runtime_error {
 public:
  AlignmentError(const std::string& what,
                 std::vector<std::string> missing_predictions,
                 std::vector<std::string> unknown_predictions)
      : std::runtime_error(what),
        missing_predictions_(std::move(missing_predictions)),
        unknown_predictions_(std::move(unknown_predictions)) {}

  // Gold ids with no prediction.
  const std::vector<std::string>& missing_predictions() const {
    return missing_predictions_;
  }
  // Prediction ids with no gold entry.
  const std::vector<std::string>& unknown_predictions() const {
    return unknown_predictions_;
  }

 private:
  std::vector<std::string> missing_predictions_;
  std::vector<std::string> unknown_predictions_;
};

}  // namespace scenetext

#endif  // SCENETEXT_ERRORS_H_
