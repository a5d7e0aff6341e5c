#pragma once

#include <stdexcept>
#include <string>

namespace judgeattack {

// Invalid parameters, duplicate reserved tokens, unknown config keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (dataset line, vocab file, parameter file).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally valid input that lacks a required field.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Judge could not score an instance (empty answer, bad token id, ...).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation contract, e.g. JMA loss without marker scores.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ASR requested with zero attempts.
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace judgeattack
