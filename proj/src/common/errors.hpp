// Copyright (c) 2026 The uncerank Authors. All Rights Reserved.
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
//------------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace uncerank {

enum class ErrorKind {
  Config,
  Data,
  Protocol,
  Io,
  Shape,
  Lookup,
  Calibration,
  UndefinedCorrelation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define UNCERANK_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

UNCERANK_DEFINE_ERROR(ConfigError, Config)
UNCERANK_DEFINE_ERROR(DataError, Data)
UNCERANK_DEFINE_ERROR(ProtocolError, Protocol)
UNCERANK_DEFINE_ERROR(IoError, Io)
UNCERANK_DEFINE_ERROR(ShapeError, Shape)
UNCERANK_DEFINE_ERROR(LookupError, Lookup)
UNCERANK_DEFINE_ERROR(CalibrationError, Calibration)
UNCERANK_DEFINE_ERROR(UndefinedCorrelationError, UndefinedCorrelation)

#undef UNCERANK_DEFINE_ERROR

// CLI exit codes: 2 configuration, 3 data/protocol, 4 I/O.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Io:
      return 4;
    default:
      return 3;
  }
}

}  // namespace uncerank
