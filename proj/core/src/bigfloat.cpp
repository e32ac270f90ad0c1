#include "amo/bigfloat.hpp"

#include <cmath>

namespace amo {

unsigned PrecisionGuard::digits10_for_bits(unsigned bits) {
  // ceil(bits * log10(2)) plus slack so round-trips do not lose bits.
  return static_cast<unsigned>(bits * 0.3010299956639812) + 4;
}

PrecisionGuard::PrecisionGuard(unsigned bits)
    : saved_digits10_(BigFloat::default_precision()) {
  BigFloat::default_precision(digits10_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() {
  BigFloat::default_precision(saved_digits10_);
}

BigFloat bf_pi() {
  BigFloat r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

BigFloat bf_frac(const BigFloat& x) {
  BigFloat f = x - floor(x);
  if (f < 0) f += 1;    // floor rounding can land a hair below zero
  if (f >= 1) f -= 1;
  return f;
}

double torus_norm(double x) {
  double r = x - std::nearbyint(x);
  return std::abs(r);
}

BigFloat torus_norm(const BigFloat& x) {
  BigFloat f = bf_frac(x);
  if (f > 0.5) f = 1 - f;
  return abs(f);
}

BigFloat bf_sin2pi(const BigFloat& x) {
  BigFloat f = bf_frac(x);
  return sin(2 * bf_pi() * f);
}

BigFloat bf_cos2pi(const BigFloat& x) {
  BigFloat f = bf_frac(x);
  return cos(2 * bf_pi() * f);
}

}  // namespace amo
