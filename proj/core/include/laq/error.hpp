// Copyright 2026 The laq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace laq {

/// Base class for all laq errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NegativeCell : Error {
  using Error::Error;
};

struct FrozenDictionary : Error {
  using Error::Error;
};

struct DuplicateKey : Error {
  using Error::Error;
};

struct KeyOrderViolation : Error {
  using Error::Error;
};

struct ReferentialIntegrity : Error {
  using Error::Error;
};

/// Malformed data value in an input file (carries row/column context).
struct ParseError : Error {
  using Error::Error;
};

/// Malformed schema or script text (carries line/column context).
struct SyntaxError : Error {
  using Error::Error;
};

struct DuplicateBinding : SyntaxError {
  using SyntaxError::SyntaxError;
};

struct UnboundVariable : SyntaxError {
  using SyntaxError::SyntaxError;
};

struct TypeError : Error {
  using Error::Error;
};

/// Predicate or scalar expression referencing more than one table.
struct MixedTableError : TypeError {
  using TypeError::TypeError;
};

struct NameResolution : Error {
  using Error::Error;
};

struct NotDeltaSafe : Error {
  using Error::Error;
};

/// Arithmetic failure while evaluating a lifted or scalar expression.
struct EvalError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace laq
