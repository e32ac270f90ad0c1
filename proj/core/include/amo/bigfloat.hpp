#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace amo {

// Arbitrary-precision real. Working precision is the thread-local default
// of the backend; scope a PrecisionGuard around code that needs a specific
// precision. Expression templates are off so temporaries behave like values.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

// Exact integer used for partial quotients and convergents.
using BigInt = boost::multiprecision::cpp_int;

// Sets the default BigFloat precision (in bits) for the current thread and
// restores the previous value on scope exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  static unsigned digits10_for_bits(unsigned bits);

 private:
  unsigned saved_digits10_;
};

// pi at the current default precision.
BigFloat bf_pi();

// x reduced to [0, 1).
BigFloat bf_frac(const BigFloat& x);

// Distance to the nearest integer.
double torus_norm(double x);
BigFloat torus_norm(const BigFloat& x);

// sin(2 pi x) / cos(2 pi x) evaluated after exact-range reduction of x;
// accurate for arguments of any magnitude representable at the precision.
BigFloat bf_sin2pi(const BigFloat& x);
BigFloat bf_cos2pi(const BigFloat& x);

}  // namespace amo
