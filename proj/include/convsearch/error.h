// Copyright 2026 The convsearch Authors.
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

#ifndef CONVSEARCH_ERROR_H_
#define CONVSEARCH_ERROR_H_

#include <stdexcept>
#include <string>

namespace convsearch {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: violated precondition or malformed argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed file content. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string &path, int line, const std::string &what)
      : Error(path + ":" + std::to_string(line) + ": " + what),
        path_(path), line_(line) {}

  const std::string &path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

// Failure talking to an external service (rewriter, reranker, linker,
// summarizer).
class AdapterError : public Error {
 public:
  enum class Kind { kUnreachable, kHttpStatus, kMalformedPayload };

  AdapterError(Kind kind, const std::string &what)
      : Error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace convsearch

#endif  // CONVSEARCH_ERROR_H_
