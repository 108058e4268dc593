// Copyright 2026 The UncAD Selection Authors
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

#ifndef UNCAD__ERRORS_HPP_
#define UNCAD__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace uncad
{

// Precondition violations use std::invalid_argument. The types below cover the
// failure classes the command line front end maps onto distinct exit codes.

/// Bad command line or configuration value.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed scenario or manifest file. The message names the line or field.
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Missing or unsupported schema version.
class VersionError : public ParseError
{
public:
  using ParseError::ParseError;
};

/// A value parsed fine but violates a domain invariant (e.g. negative scale).
class InvariantError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; the message carries the offending path.
class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A reference implementation disagreed with the production path.
class OracleMismatch : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace uncad

#endif  // UNCAD__ERRORS_HPP_
