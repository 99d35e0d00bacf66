#include <helmlab/specfun.hpp>

#include <helmlab/error.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace helmlab::specfun
{

namespace
{

constexpr double kEuler = 0.57721566490153286061;
// Rescaling by e^{-460} keeps the exponent bookkeeping in exact integers.
constexpr double kLogRescale = 460.0;
const double kRescale = std::exp(kLogRescale);
const double kInvRescale = std::exp(-kLogRescale);
constexpr double kLogMaxDouble = 709.0;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void validate(int n, cplx z, bool k_kind)
{
  if (!finite(z))
    throw Error(ErrorKind::Input, "non-finite Bessel argument");
  if (n < 0 || n > kMaxOrder + 2)
    throw Error(ErrorKind::Range, "Bessel order out of range");
  if (std::abs(z) > kMaxArgument)
    throw Error(ErrorKind::Range, "Bessel argument modulus above 1e4");
  if (z == cplx(0.0, 0.0))
  {
    if (k_kind)
      throw Error(ErrorKind::Singularity, "K_n is singular at z = 0");
    return;
  }
  if (z.real() <= 0.0)
    throw Error(ErrorKind::Range, "Bessel argument outside the open right half-plane");
}

double fast_abs(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

bool series_regime(int order, cplx z)
{
  double a = std::abs(z);
  return a <= 2.0 || a * a <= 4.0 * (order + 1);
}

bool asymptotic_regime(int order, cplx z)
{
  return std::abs(z) >= 25.0 + 0.5 * double(order) * double(order);
}

// (z/2)^k / k! * sum_j (z^2/4)^j k! / (j! (j+k)!)
Scaled i_series(int k, cplx z)
{
  if (z == cplx(0.0, 0.0))
    return k == 0 ? Scaled{cplx(1.0, 0.0), 0.0} : Scaled{};
  const cplx q = 0.25 * z * z;
  const double aq = std::abs(q);
  cplx t = 1.0, s = 1.0;
  for (int j = 1; j < 2000; ++j)
  {
    t *= q / (double(j) * double(j + k));
    s += t;
    if (double(j) * double(j + k) > aq && fast_abs(t) < 1e-17 * fast_abs(s))
      break;
  }
  // (z/2)^k / k! by repeated multiplication; exact to a few ulps per factor.
  cplx pre = 1.0;
  double exponent = 0.0;
  for (int j = 1; j <= k; ++j)
  {
    pre *= 0.5 * z / double(j);
    if (fast_abs(pre) < kInvRescale)
    {
      pre *= kRescale;
      exponent -= kLogRescale;
    }
  }
  return Scaled::from_log(pre * s, exponent);
}

// Hankel expansions: alt = sum (-1)^k a_k(n) / z^k, pos = sum a_k(n) / z^k.
void hankel_sums(int n, cplx z, cplx &alt, cplx &pos)
{
  const double mu = 4.0 * double(n) * double(n);
  const cplx inv_z = 1.0 / z;
  cplx term = 1.0;
  alt = 1.0;
  pos = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 400; ++k)
  {
    double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k) * inv_z;
    double mag = std::abs(term);
    if (mag > prev)
    {
      if (prev > 1e-15 * std::min(std::abs(alt), std::abs(pos)))
        throw Error(ErrorKind::Accuracy, "Hankel expansion diverged before convergence");
      return;
    }
    prev = mag;
    pos += term;
    alt += (k % 2 == 1) ? -term : term;
    if (mag < 1e-17 * std::min(std::abs(alt), std::abs(pos)))
      return;
  }
}

Scaled i_asymptotic(int n, cplx z)
{
  cplx alt, pos;
  hankel_sums(n, z, alt, pos);
  double sigma = z.imag() > 0.0 ? 1.0 : (z.imag() < 0.0 ? -1.0 : 0.0);
  double parity = (n % 2 == 0) ? 1.0 : -1.0;
  cplx m = alt;
  if (sigma != 0.0)
    m += cplx(0.0, sigma * parity) * std::exp(-2.0 * z) * pos;
  m *= std::polar(1.0, z.imag()) / std::sqrt(2.0 * std::numbers::pi * z);
  return Scaled::from_log(m, z.real());
}

Scaled k_asymptotic(int n, cplx z)
{
  cplx alt, pos;
  hankel_sums(n, z, alt, pos);
  cplx m = std::sqrt(std::numbers::pi / (2.0 * z)) * std::polar(1.0, -z.imag()) * pos;
  return Scaled::from_log(m, -z.real());
}

// Miller backward recurrence normalised by I_0 + 2 sum I_k = e^z.
std::vector<Scaled> i_miller(int first, int last, cplx z)
{
  const double az = std::abs(z);
  double acc = 0.0;
  int k = std::max(last, 1);
  while (true)
  {
    double kk = k;
    cplx ratio = z / (kk + std::sqrt(kk * kk + z * z));
    acc += std::log(std::abs(ratio));
    ++k;
    if (acc < -42.0 && k > az)
      break;
    if (k > 100000)
      throw Error(ErrorKind::Accuracy, "Miller start index search failed");
  }
  const int start = k + 12;
  const cplx inv_z = 1.0 / z;
  std::vector<cplx> stored(last - first + 1);
  std::vector<double> stored_log(last - first + 1);
  cplx y_next = 0.0, y = 1.0, sum = 0.0;
  double log_acc = 0.0;
  for (int j = start; j >= 1; --j)
  {
    cplx y_prev = y_next + (2.0 * j) * inv_z * y;
    sum += 2.0 * y;
    y_next = y;
    y = y_prev;
    if (fast_abs(y) > kRescale)
    {
      y *= kInvRescale;
      y_next *= kInvRescale;
      sum *= kInvRescale;
      log_acc += kLogRescale;
    }
    int order = j - 1;
    if (order >= first && order <= last)
    {
      stored[order - first] = y;
      stored_log[order - first] = log_acc;
    }
  }
  sum += y;
  std::vector<Scaled> out(last - first + 1);
  const cplx phase = std::polar(1.0, z.imag());
  for (int i = 0; i <= last - first; ++i)
  {
    out[i] = Scaled::from_log(stored[i] / sum * phase, stored_log[i] - log_acc) *
             Scaled::from_log(1.0, z.real());
  }
  return out;
}

// K_0, K_1 by the logarithmic series, |z| <= 2.
void k01_series(cplx z, cplx &k0, cplx &k1)
{
  const cplx q = 0.25 * z * z;
  const cplx lg = std::log(0.5 * z);
  cplx t = 1.0, u = 1.0;
  cplx i0 = 1.0, i1 = 1.0, s0 = 0.0, s1 = 1.0 - 2.0 * kEuler;
  double h = 0.0;
  for (int k = 1; k < 200; ++k)
  {
    t *= q / (double(k) * double(k));
    u *= q / (double(k) * double(k + 1));
    h += 1.0 / k;
    double h1 = h + 1.0 / (k + 1);
    i0 += t;
    i1 += u;
    s0 += h * t;
    s1 += (h + h1 - 2.0 * kEuler) * u;
    if (fast_abs(u) < 1e-18 && fast_abs(t) < 1e-18)
      break;
  }
  k0 = -(lg + kEuler) * i0 + s0;
  k1 = 1.0 / z + lg * (0.5 * z) * i1 - 0.25 * z * s1;
}

// e^z K_0(z), e^z K_1(z) by Steed's continued fraction, |z| > 2.
void k01_cf2(cplx x, cplx &k0s, cplx &k1s)
{
  cplx b = 2.0 * (1.0 + x);
  cplx d = 1.0 / b;
  cplx h = d, delh = d;
  cplx q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  cplx q = a1, c = a1;
  double a = -a1;
  cplx s = 1.0 + q * delh;
  int i = 1;
  for (; i < 200000; ++i)
  {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    cplx qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    cplx dels = q * delh;
    s += dels;
    if (std::abs(dels) < 1e-17 * std::abs(s))
      break;
  }
  if (i >= 200000)
    throw Error(ErrorKind::Accuracy, "K continued fraction did not converge");
  h = a1 * h;
  k0s = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  k1s = k0s * (x + 0.5 - h) / x;
}

std::vector<Scaled> k_forward(int first, int last, cplx z)
{
  cplx y0, y1;
  double base = 0.0;
  if (std::abs(z) <= 2.0)
  {
    k01_series(z, y0, y1);
  }
  else
  {
    cplx k0s, k1s;
    k01_cf2(z, k0s, k1s);
    cplx phase = std::polar(1.0, -z.imag());
    y0 = k0s * phase;
    y1 = k1s * phase;
    base = -z.real();
  }
  std::vector<Scaled> out(last - first + 1);
  auto put = [&](int order, cplx v) {
    if (order >= first && order <= last)
      out[order - first] = Scaled::from_log(v, 0.0) * Scaled::from_log(1.0, base);
  };
  put(0, y0);
  put(1, y1);
  const cplx inv_z = 1.0 / z;
  for (int j = 1; j < last; ++j)
  {
    cplx y2 = y0 + (2.0 * j) * inv_z * y1;
    y0 = y1;
    y1 = y2;
    if (fast_abs(y1) > kRescale)
    {
      y0 *= kInvRescale;
      y1 *= kInvRescale;
      base += kLogRescale;
    }
    put(j + 1, y1);
  }
  return out;
}

Scaled pick(const std::vector<Scaled> &v, int first, int order)
{
  return v[std::abs(order) - first];
}

void check_representable(const Scaled &s)
{
  if (!s.is_zero() && s.log_abs() > kLogMaxDouble)
    throw Error(ErrorKind::Range, "Bessel value overflows; use the scaled interface");
}

}  // namespace

Scaled Scaled::from(cplx v) { return Scaled{v, 0.0}.normalized(); }

Scaled Scaled::from_log(cplx mantissa, double log_factor)
{
  double whole = std::round(log_factor);
  return Scaled{mantissa * std::exp(log_factor - whole), whole}.normalized();
}

cplx Scaled::value() const
{
  if (is_zero())
    return 0.0;
  return mantissa * std::exp(exponent);
}

double Scaled::log_abs() const
{
  if (is_zero())
    return -std::numeric_limits<double>::infinity();
  return exponent + std::log(std::abs(mantissa));
}

Scaled Scaled::normalized() const
{
  if (is_zero())
    return Scaled{};
  double shift = std::round(std::log(std::abs(mantissa)));
  if (shift == 0.0)
    return *this;
  return Scaled{mantissa * std::exp(-shift), exponent + shift};
}

Scaled operator*(const Scaled &a, const Scaled &b)
{
  if (a.is_zero() || b.is_zero())
    return Scaled{};
  return Scaled{a.mantissa * b.mantissa, a.exponent + b.exponent}.normalized();
}

Scaled operator/(const Scaled &a, const Scaled &b)
{
  if (b.is_zero())
    throw Error(ErrorKind::Singularity, "division by zero scaled value");
  if (a.is_zero())
    return Scaled{};
  return Scaled{a.mantissa / b.mantissa, a.exponent - b.exponent}.normalized();
}

Scaled operator+(const Scaled &a, const Scaled &b)
{
  if (a.is_zero())
    return b;
  if (b.is_zero())
    return a;
  if (a.exponent >= b.exponent)
    return Scaled{a.mantissa + b.mantissa * std::exp(b.exponent - a.exponent), a.exponent}
        .normalized();
  return Scaled{b.mantissa + a.mantissa * std::exp(a.exponent - b.exponent), b.exponent}
      .normalized();
}

Scaled operator-(const Scaled &a) { return Scaled{-a.mantissa, a.exponent}; }

Scaled operator-(const Scaled &a, const Scaled &b) { return a + (-b); }

Scaled operator*(const Scaled &a, cplx b) { return a * Scaled::from(b); }

std::vector<Scaled> bessel_i_orders(int first, int last, cplx z)
{
  if (first < 0 || last < first)
    throw Error(ErrorKind::Input, "invalid Bessel order range");
  validate(last, z, false);
  std::vector<Scaled> out(last - first + 1);
  if (z == cplx(0.0, 0.0) || series_regime(first, z))
  {
    for (int k = first; k <= last; ++k)
      out[k - first] = i_series(k, z);
  }
  else if (asymptotic_regime(last, z))
  {
    for (int k = first; k <= last; ++k)
      out[k - first] = i_asymptotic(k, z);
  }
  else
  {
    out = i_miller(first, last, z);
  }
  return out;
}

std::vector<Scaled> bessel_k_orders(int first, int last, cplx z)
{
  if (first < 0 || last < first)
    throw Error(ErrorKind::Input, "invalid Bessel order range");
  validate(last, z, true);
  if (asymptotic_regime(last, z))
  {
    std::vector<Scaled> out(last - first + 1);
    for (int k = first; k <= last; ++k)
      out[k - first] = k_asymptotic(k, z);
    return out;
  }
  return k_forward(first, last, z);
}

Jet bessel_i_jet(int n, cplx z)
{
  n = std::abs(n);
  int first = std::max(0, n - 2);
  if (n < 2)
    first = 0;
  auto v = bessel_i_orders(first, n + 2, z);
  Jet jet;
  jet.f = pick(v, first, n);
  jet.df = (pick(v, first, n - 1) + pick(v, first, n + 1)) * cplx(0.5);
  jet.d2f = (pick(v, first, n - 2) + pick(v, first, n) * cplx(2.0) + pick(v, first, n + 2)) *
            cplx(0.25);
  return jet;
}

Jet bessel_k_jet(int n, cplx z)
{
  n = std::abs(n);
  int first = n < 2 ? 0 : n - 2;
  auto v = bessel_k_orders(first, n + 2, z);
  Jet jet;
  jet.f = pick(v, first, n);
  jet.df = (pick(v, first, n - 1) + pick(v, first, n + 1)) * cplx(-0.5);
  jet.d2f = (pick(v, first, n - 2) + pick(v, first, n) * cplx(2.0) + pick(v, first, n + 2)) *
            cplx(0.25);
  return jet;
}

Scaled bessel_i_scaled(int n, cplx z)
{
  validate(n, z, false);
  if (n > kMaxOrder)
    throw Error(ErrorKind::Range, "Bessel order above 256");
  return bessel_i_orders(n, n, z)[0];
}

Scaled bessel_k_scaled(int n, cplx z)
{
  validate(n, z, true);
  if (n > kMaxOrder)
    throw Error(ErrorKind::Range, "Bessel order above 256");
  return bessel_k_orders(n, n, z)[0];
}

namespace
{

void check_order(int n)
{
  if (n < 0 || n > kMaxOrder)
    throw Error(ErrorKind::Range, "Bessel order out of range");
}

}  // namespace

cplx bessel_i(int n, cplx z)
{
  check_order(n);
  Scaled s = bessel_i_scaled(n, z);
  check_representable(s);
  return s.value();
}

cplx bessel_i_prime(int n, cplx z)
{
  check_order(n);
  Scaled s = bessel_i_jet(n, z).df;
  check_representable(s);
  return s.value();
}

cplx bessel_k(int n, cplx z)
{
  check_order(n);
  Scaled s = bessel_k_scaled(n, z);
  check_representable(s);
  return s.value();
}

cplx bessel_k_prime(int n, cplx z)
{
  check_order(n);
  Scaled s = bessel_k_jet(n, z).df;
  check_representable(s);
  return s.value();
}

double wronskian_residual(int n, cplx z)
{
  check_order(n);
  Jet i = bessel_i_jet(n, z);
  Jet k = bessel_k_jet(n, z);
  Scaled w = i.f * k.df - i.df * k.f;
  return std::abs(w.value() + 1.0 / z) * std::abs(z);
}

double recurrence_residual(int n, cplx z)
{
  if (n < 1)
    throw Error(ErrorKind::Input, "recurrence residual needs n >= 1");
  check_order(n);
  validate(n, z, true);
  auto v = bessel_i_orders(n - 1, n + 1, z);
  Scaled r = v[0] - v[2] - v[1] * (2.0 * n / z);
  return (r / v[1]).value() == cplx(0.0) ? 0.0 : std::abs((r / v[1]).value());
}

}  // namespace helmlab::specfun
