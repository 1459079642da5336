// Copyright 2026 The nvsqueeze Authors
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

namespace nvsq {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A SystemParams / geometry / spec field violates its invariants.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// |ω| = v: the eliminated coefficients A and B diverge.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// A closed form was asked for outside the parameter domain it covers.
class DomainError : public Error {
 public:
  using Error::Error;
};

class RegimeError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Unknown or repeated mode label, or a mode index outside the layout.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Overflow or NaN while propagating moments.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Truncated Fock basis is too small for the populated levels.
class CutoffOverflowError : public Error {
 public:
  using Error::Error;
};

class InconclusiveError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Every sample of a trace breaks the Holstein-Primakoff validity limit.
class HpInvalidError : public Error {
 public:
  using Error::Error;
};

class EmptyTraceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nvsq
