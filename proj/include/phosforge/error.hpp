// Copyright 2026 The PhosForge Authors. All Rights Reserved.
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

namespace phosforge {

/// Base class for every error raised by the library. Messages are meant to be
/// shown to an operator verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented precondition (constant column, too few
/// values, missing target, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A persisted document (model file, CSV header) cannot be interpreted.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace phosforge
