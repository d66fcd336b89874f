//
// Copyright 2026 The ldiv Authors
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
//

#ifndef LDIV_ERROR_HPP_
#define LDIV_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ldiversity {

// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorKind {
  kInvalidArgument,  // bad input to a library call, or bad configuration
  kIneligible,       // the table (or a requested group) is not l-eligible
  kInvariant,        // an internal invariant broke; indicates a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InvalidArgument(const std::string& message) {
  return Error(ErrorKind::kInvalidArgument, message);
}
inline Error Ineligible(const std::string& message) {
  return Error(ErrorKind::kIneligible, message);
}
inline Error InvariantViolation(const std::string& message) {
  return Error(ErrorKind::kInvariant, "invariant violation: " + message);
}

}  // namespace ldiversity

#endif  // LDIV_ERROR_HPP_
