#pragma once

#include <complex>

namespace helmlab
{

using cplx = std::complex<double>;

enum class Regime
{
  Zero,
  RealNonzero,
  RightHalfPlane
};

const char *to_string(Regime regime);

// Spectral parameter of lambda^2 u - Delta u = f. Only lambda^2 enters the
// problem, so a parameter with Re < 0 is replaced by its negative. Purely
// imaginary values are rejected.
class Frequency
{
public:
  Frequency() = default;
  explicit Frequency(cplx lambda);

  static Frequency real(double lambda) { return Frequency(cplx(lambda, 0.0)); }
  static Frequency ray(double t, double phi);

  cplx value() const { return lambda_; }
  cplx squared() const { return lambda_ * lambda_; }
  double modulus() const { return std::abs(lambda_); }
  double margin() const { return lambda_.real(); }
  Regime regime() const { return regime_; }
  bool is_zero() const { return regime_ == Regime::Zero; }
  bool is_real() const { return regime_ != Regime::RightHalfPlane; }

private:
  cplx lambda_{};
  Regime regime_ = Regime::Zero;
};

}  // namespace helmlab
