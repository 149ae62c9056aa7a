// Copyright 2026 The critcast Authors.
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

namespace critcast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario parameter violates one of the configuration invariants.
/// `parameter()` is the literal scenario key at fault.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string parameter, const std::string& what)
      : Error(parameter + ": " + what), parameter_(std::move(parameter)) {}

  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

/// A run did not settle before the hard VF cap.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

/// Occupancy quantities are undefined without contenders.
class ContendersZero : public Error {
 public:
  ContendersZero() : Error("occupancy requested for zero contenders") {}
};

/// Metrics requested over a trace that paged nobody.
class EmptyTrace : public Error {
 public:
  EmptyTrace() : Error("metrics requested for an empty trace") {}
};

}  // namespace critcast
