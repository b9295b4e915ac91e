#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sphereiso {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact rational with 64-bit components, always normalized with den > 0.
/// Intermediates go through __int128; a result that does not fit back into
/// 64 bits throws NumericError instead of silently overflowing.
struct Rat {
  long long num{0};
  long long den{1};

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) {
    if (d == 0) throw NumericError("rational with zero denominator");
    assign(static_cast<__int128>(n), static_cast<__int128>(d));
  }

  static Rat make(__int128 n, __int128 d) {
    Rat r;
    if (d == 0) throw NumericError("rational with zero denominator");
    r.assign(n, d);
    return r;
  }

  bool is_zero() const { return num == 0; }
  bool is_negative() const { return num < 0; }
  bool is_integer() const { return den == 1; }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make((__int128)a.num * b.den + (__int128)b.num * a.den,
                (__int128)a.den * b.den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make((__int128)a.num * b.den - (__int128)b.num * a.den,
                (__int128)a.den * b.den);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num == 0) throw NumericError("rational division by zero");
    return make((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rat operator-() const { return make(-(__int128)num, den); }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  Rat abs() const { return num < 0 ? -*this : *this; }

  /// Integer power, exponent >= 0.
  Rat pow(unsigned e) const {
    Rat r(1), base = *this;
    while (e) {
      if (e & 1) r *= base;
      base = (e >>= 1) ? base * base : base;
    }
    return r;
  }

  /// Nearest rational with bounded denominator (continued fractions).
  /// Used only when float-mode inputs must enter exact arithmetic.
  static Rat from_double(double x, long long max_den = 1'000'000'000LL) {
    if (!std::isfinite(x)) throw NumericError("cannot convert non-finite double");
    bool neg = x < 0;
    double v = neg ? -x : x;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int i = 0; i < 64; ++i) {
      double fl = std::floor(frac);
      if (fl > 9e18) break;
      long long a = static_cast<long long>(fl);
      __int128 p2 = (__int128)a * p1 + p0;
      __int128 q2 = (__int128)a * q1 + q0;
      if (q2 > max_den || p2 > (__int128)4e18) break;
      p0 = p1; q0 = q1;
      p1 = (long long)p2; q1 = (long long)q2;
      double rem = frac - fl;
      if (rem < 1e-15) break;
      frac = 1.0 / rem;
    }
    if (q1 == 0) return Rat(0);
    Rat r(p1, q1);
    return neg ? -r : r;
  }

 private:
  void assign(__int128 n, __int128 d) {
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
      throw NumericError("rational overflow");
    num = (long long)n;
    den = (long long)d;
  }
};

/// Extended nonnegative value in [0, inf]: a measure mass.
/// Conventions: inf + x = inf, 0 * inf = 0.
struct Mass {
  bool inf{false};
  Rat fin{0};

  Mass() = default;
  Mass(Rat r) : fin(r) {
    if (r.is_negative()) throw NumericError("negative mass");
  }
  Mass(long long n) : Mass(Rat(n)) {}
  static Mass infinity() { Mass m; m.inf = true; return m; }

  bool is_zero() const { return !inf && fin.is_zero(); }
  bool is_finite() const { return !inf; }
  bool is_positive() const { return inf || !fin.is_zero(); }

  const Rat& finite() const {
    if (inf) throw NumericError("finite() on infinite mass");
    return fin;
  }
  double to_double() const {
    return inf ? std::numeric_limits<double>::infinity() : fin.to_double();
  }
  std::string str() const { return inf ? "inf" : fin.str(); }

  friend Mass operator+(const Mass& a, const Mass& b) {
    if (a.inf || b.inf) return infinity();
    return Mass(a.fin + b.fin);
  }
  Mass& operator+=(const Mass& o) { return *this = *this + o; }

  friend Mass operator*(const Mass& a, const Mass& b) {
    if (a.is_zero() || b.is_zero()) return Mass(Rat(0));
    if (a.inf || b.inf) return infinity();
    return Mass(a.fin * b.fin);
  }

  friend bool operator==(const Mass& a, const Mass& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.fin == b.fin;
  }
  friend bool operator!=(const Mass& a, const Mass& b) { return !(a == b); }
  friend bool operator<(const Mass& a, const Mass& b) {
    if (a.inf) return false;
    if (b.inf) return true;
    return a.fin < b.fin;
  }
  friend bool operator<=(const Mass& a, const Mass& b) { return !(b < a); }
};

/// splitmix64 step; used to derive per-trial seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sphereiso
