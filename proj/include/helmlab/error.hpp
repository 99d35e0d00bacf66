#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace helmlab
{

enum class ErrorKind
{
  Range,
  Input,
  Regime,
  Capability,
  Accuracy,
  Truncation,
  Compatibility,
  Singularity,
  Degenerate,
  Precondition,
  Config
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what,
        double value = std::numeric_limits<double>::quiet_NaN());

  ErrorKind kind() const { return kind_; }
  // Attached quantity, e.g. the tail bound for a truncation error.
  double value() const { return value_; }

private:
  ErrorKind kind_;
  double value_;
};

}  // namespace helmlab
