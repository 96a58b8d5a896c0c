// Copyright 2026 The Scramblon Lab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace scramblon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: violated precondition, malformed model parameters, bad
/// distribution. Maps to CLI exit code 2.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// A numerical guard refused to run (integrator stability, Trotter step,
/// aliasing, memory caps). Maps to CLI exit code 3.
class GuardError : public Error {
   public:
    using Error::Error;
};

/// File or stream failure. Maps to CLI exit code 4.
class IoError : public Error {
   public:
    using Error::Error;
};

}  // namespace scramblon
