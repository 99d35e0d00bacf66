#include <helmlab/error.hpp>
#include <helmlab/frequency.hpp>

#include <cmath>

namespace helmlab
{

const char *to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::Range:
      return "range";
    case ErrorKind::Input:
      return "input";
    case ErrorKind::Regime:
      return "regime";
    case ErrorKind::Capability:
      return "capability";
    case ErrorKind::Accuracy:
      return "accuracy";
    case ErrorKind::Truncation:
      return "truncation";
    case ErrorKind::Compatibility:
      return "compatibility";
    case ErrorKind::Singularity:
      return "singularity";
    case ErrorKind::Degenerate:
      return "degenerate-input";
    case ErrorKind::Precondition:
      return "precondition";
    case ErrorKind::Config:
      return "config";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string &what, double value)
  : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind),
    value_(value)
{
}

const char *to_string(Regime regime)
{
  switch (regime)
  {
    case Regime::Zero:
      return "zero";
    case Regime::RealNonzero:
      return "real";
    case Regime::RightHalfPlane:
      return "complex";
  }
  return "unknown";
}

Frequency::Frequency(cplx lambda)
{
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw Error(ErrorKind::Input, "non-finite spectral parameter");
  if (lambda.real() < 0.0)
    lambda = -lambda;
  if (lambda == cplx(0.0, 0.0))
  {
    lambda_ = {};
    regime_ = Regime::Zero;
    return;
  }
  if (lambda.real() == 0.0)
    throw Error(ErrorKind::Regime, "purely imaginary spectral parameter is not supported");
  lambda_ = lambda;
  regime_ = lambda.imag() == 0.0 ? Regime::RealNonzero : Regime::RightHalfPlane;
}

Frequency Frequency::ray(double t, double phi)
{
  cplx v = std::polar(t, phi);
  if (phi == 0.0)
    v = cplx(t, 0.0);
  return Frequency(v);
}

}  // namespace helmlab
