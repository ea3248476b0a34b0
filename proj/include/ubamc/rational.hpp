#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ubamc {

/// Exact arbitrary-precision fraction; the sole numeric type of every core
/// computation. Always canonical: gcd(|num|, den) = 1 and den >= 1, zero
/// is 0/1. Backed by GMP.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long num, long den);
    explicit Rational(long num) : v_(num) {}
    explicit Rational(const mpz_class& num) : v_(num) {}
    Rational(const mpz_class& num, const mpz_class& den);

    /// Parses "p/q" or a bare integer. Throws Error on malformed input,
    /// including a zero denominator.
    static Rational parse(const std::string& text);

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }
    bool in_unit_interval() const { return sgn(v_) >= 0 && v_ <= 1; }

    /// Total bits of numerator plus denominator; the pivot-size measure.
    std::size_t bit_size() const;

    /// Always "num/den", e.g. "0/1", "1/1", "1/2".
    std::string fraction_str() const;
    /// "num/den", except a denominator of 1 prints as a bare integer.
    std::string compact_str() const;
    /// Decimal rendering: round-half-even to `significant` digits, with a
    /// trailing "…" when the decimal expansion does not terminate there.
    /// Defined for nonnegative values.
    std::string decimal_str(int significant = 30) const;

    double to_double() const { return v_.get_d(); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class v_;
};

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

}  // namespace ubamc
