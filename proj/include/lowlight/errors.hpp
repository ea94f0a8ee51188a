// Copyright (c) the lowlight Authors
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

#ifndef LOWLIGHT_ERRORS_HPP_
#define LOWLIGHT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lowlight {

enum class ErrorCode {
  kInvalidArgument,       // bad parameter value, dimension mismatch, non-finite samples
  kIoFailure,             // file unreadable / unwritable
  kUnsupportedFormat,     // magic bytes are neither PNG nor binary PPM
  kCorruptData,           // recognized format with a broken header or truncated payload
  kDegenerateHistogram,   // histogram carries no usable spread (e.g. constant plane)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace lowlight

#endif  // LOWLIGHT_ERRORS_HPP_
