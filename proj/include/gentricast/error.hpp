// Copyright 2026-present the gentricast authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace gentricast {

/// Base of every error the library throws. The CLI maps the three
/// families below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing configuration, invalid parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input files that cannot be read or violate their schema.
class IngestError : public Error {
 public:
  using Error::Error;
};

/// A required column is absent from a delimited input file.
class SchemaError : public IngestError {
 public:
  SchemaError(const std::string& file, const std::string& column)
      : IngestError(file + ": missing required column '" + column + "'"), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

/// Numerical or modelling failure: degenerate data, invalid shapes.
class ComputeError : public Error {
 public:
  using Error::Error;
};

/// A target specification asks for a measure the city does not publish.
class UnsupportedMeasure : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

}  // namespace gentricast
