/*
 * Copyright (c) 2026 The FCPN Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FCPN_ERROR_HPP
#define FCPN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcpn {

/// Base of every error raised by the library. Callers that only need to know
/// "something was wrong with the input" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor extents do not line up. The message names the offending axis.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An architecture or pipeline setting is inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller supplied data outside an operation's domain.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Text or binary input could not be parsed. Carries the 1-based line for
/// text formats, or the byte offset for binary ones (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset = 0)
      : Error(what), line_(line), offset_(offset) {}

  std::size_t line() const { return line_; }
  std::size_t offset() const { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

/// A binary file (checkpoint, FCVX) has a bad magic, version or is truncated.
class CorruptFileError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcpn

#endif  // FCPN_ERROR_HPP
