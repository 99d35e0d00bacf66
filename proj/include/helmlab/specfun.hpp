#pragma once

#include <complex>
#include <vector>

namespace helmlab::specfun
{

using cplx = std::complex<double>;

// Complex number held as mantissa * exp(exponent) with an integer-valued
// exponent and e^{-1/2} <= |mantissa| <= e^{1/2}. Integer exponents keep
// products and ratios exact far outside the double range.
struct Scaled
{
  cplx mantissa{};
  double exponent = 0.0;

  static Scaled from(cplx v);
  // mantissa * exp(log_factor) for an arbitrary real log_factor.
  static Scaled from_log(cplx mantissa, double log_factor);
  // mantissa * exp(exponent); overflows to inf or underflows to 0 silently.
  cplx value() const;
  bool is_zero() const { return mantissa == cplx(0.0, 0.0); }
  double log_abs() const;
  Scaled normalized() const;
};

Scaled operator*(const Scaled &a, const Scaled &b);
Scaled operator/(const Scaled &a, const Scaled &b);
Scaled operator+(const Scaled &a, const Scaled &b);
Scaled operator-(const Scaled &a, const Scaled &b);
Scaled operator*(const Scaled &a, cplx b);
Scaled operator-(const Scaled &a);

inline constexpr int kMaxOrder = 256;
inline constexpr double kMaxArgument = 1e4;

// Values for orders first..last (inclusive, first >= 0).
std::vector<Scaled> bessel_i_orders(int first, int last, cplx z);
std::vector<Scaled> bessel_k_orders(int first, int last, cplx z);

// f, f', f'' of I_n or K_n at z; built from orders n-2..n+2.
struct Jet
{
  Scaled f;
  Scaled df;
  Scaled d2f;
};

Jet bessel_i_jet(int n, cplx z);
Jet bessel_k_jet(int n, cplx z);

Scaled bessel_i_scaled(int n, cplx z);
Scaled bessel_k_scaled(int n, cplx z);

// Plain values; a range error is raised when the result is not representable.
cplx bessel_i(int n, cplx z);
cplx bessel_i_prime(int n, cplx z);
cplx bessel_k(int n, cplx z);
cplx bessel_k_prime(int n, cplx z);

// |I_n K_n' - I_n' K_n + 1/z| * |z|
double wronskian_residual(int n, cplx z);

// |I_{n-1} - I_{n+1} - (2n/z) I_n| / |I_n|, n >= 1
double recurrence_residual(int n, cplx z);

}  // namespace helmlab::specfun
