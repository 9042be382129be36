// Exact scalar arithmetic over a prime field F_p or the rationals (p == 0).
#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "flange/error.hpp"

namespace flange {

/// One exact scalar.  Over F_p the value is the canonical representative
/// in [0, p) with den == 1; over the rationals it is a reduced fraction
/// with den > 0.  A default-constructed Scalar is zero in every field.
struct Scalar {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Scalar&, const Scalar&) = default;
};

namespace detail {

inline std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(std::string(what) + ": 64-bit overflow");
  return static_cast<std::int64_t>(v);
}

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

/// Arithmetic for one fixed coefficient field.  characteristic() is a
/// prime for F_p and 0 for the rationals.  All operations are total on
/// valid scalars except inv/div by zero, which throw Error.
class FieldSpec {
 public:
  explicit FieldSpec(std::int64_t characteristic = 2) : p_(characteristic) {
    if (p_ == 0) return;  // rationals
    if (p_ > (std::int64_t(1) << 31) - 1)
      throw Error("field characteristic too large (must fit in 31 bits)");
    if (!detail::is_prime(p_))
      throw Error("field characteristic must be 0 or a prime, got " + std::to_string(p_));
  }

  std::int64_t characteristic() const { return p_; }
  bool is_rational() const { return p_ == 0; }

  Scalar zero() const { return {0, 1}; }
  Scalar one() const { return {1, 1}; }

  bool is_zero(const Scalar& a) const { return a.num == 0; }
  bool is_one(const Scalar& a) const { return a.num == 1 && a.den == 1; }

  /// Canonical image of an integer.
  Scalar from_int(std::int64_t v) const {
    if (p_ == 0) return {v, 1};
    std::int64_t r = v % p_;
    if (r < 0) r += p_;
    return {r, 1};
  }

  /// Canonical image of a fraction num/den; den must be a unit.
  Scalar make(std::int64_t num, std::int64_t den) const {
    if (den == 0) throw Error("scalar denominator is zero");
    if (p_ != 0) return mul(from_int(num), inv(from_int(den)));
    return reduce(num, den);
  }

  Scalar add(const Scalar& a, const Scalar& b) const {
    if (p_ != 0) return from_int(a.num + b.num);
    __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
    __int128 d = (__int128)a.den * b.den;
    return reduce128(n, d);
  }

  Scalar sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }

  Scalar neg(const Scalar& a) const {
    if (p_ != 0) return from_int(-a.num);
    return {-a.num, a.den};
  }

  Scalar mul(const Scalar& a, const Scalar& b) const {
    if (p_ != 0) return from_int(a.num * b.num);  // both < 2^31, no overflow
    return reduce128((__int128)a.num * b.num, (__int128)a.den * b.den);
  }

  Scalar inv(const Scalar& a) const {
    if (a.num == 0) throw Error("division by zero scalar");
    if (p_ == 0) return reduce(a.den, a.num);
    // Extended Euclid on (a.num, p_).
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a.num;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    return from_int(t);
  }

  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  Scalar reduce(std::int64_t n, std::int64_t d) const {
    return reduce128((__int128)n, (__int128)d);
  }

  Scalar reduce128(__int128 n, __int128 d) const {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 g = d;
    while (a != 0) {  // gcd
      __int128 t = g % a;
      g = a;
      a = t;
    }
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return {detail::checked_i64(n, "rational numerator"),
            detail::checked_i64(d, "rational denominator")};
  }

  std::int64_t p_;
};

/// Render a scalar the way the I/O layer expects it: an integer when the
/// denominator is 1, otherwise "num/den".
inline std::string to_string(const Scalar& a) {
  if (a.den == 1) return std::to_string(a.num);
  return std::to_string(a.num) + "/" + std::to_string(a.den);
}

}  // namespace flange
