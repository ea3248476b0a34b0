#include "ubamc/rational.hpp"

#include <ostream>

#include "ubamc/errors.hpp"

namespace ubamc {

Rational::Rational(long num, long den) {
    if (den == 0) throw Error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (sgn(den) == 0) throw Error("rational with zero denominator");
    v_ = mpq_class(num) / mpq_class(den);
}

Rational Rational::parse(const std::string& text) {
    auto bad = [&] { return Error("malformed rational '" + text + "'"); };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    auto is_int = [&](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!is_int(text)) throw bad();
        return Rational(mpz_class(text));
    }
    std::string ns = text.substr(0, slash);
    std::string ds = text.substr(slash + 1);
    if (!is_int(ns) || !is_int(ds)) throw bad();
    mpz_class den(ds);
    if (sgn(den) == 0) throw bad();
    return Rational(mpz_class(ns), den);
}

std::size_t Rational::bit_size() const {
    return mpz_sizeinbase(num().get_mpz_t(), 2) +
           mpz_sizeinbase(den().get_mpz_t(), 2);
}

std::string Rational::fraction_str() const {
    return num().get_str() + "/" + den().get_str();
}

std::string Rational::compact_str() const {
    if (den() == 1) return num().get_str();
    return fraction_str();
}

Rational Rational::operator-() const {
    Rational r;
    r.v_ = -v_;
    return r;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("rational division by zero");
    v_ /= o.v_;
    return *this;
}

std::string Rational::decimal_str(int significant) const {
    if (sign() < 0) throw Error("decimal rendering of a negative value");
    if (is_zero()) return "0";
    if (den() == 1) return num().get_str();

    const mpz_class& p = num();
    const mpz_class& q = den();
    mpz_class ipart = p / q;
    mpz_class rem = p % q;
    if (sgn(rem) == 0) return ipart.get_str();

    // Scale the fractional part until it carries `significant` digits.
    // digits = floor(rem * 10^e / q) with 10^(s-1) <= digits < 10^s.
    mpz_class scaled = rem;
    mpz_class lo, hi;
    mpz_ui_pow_ui(lo.get_mpz_t(), 10, significant - 1);
    hi = lo * 10;
    long exp = 0;
    while (scaled / q < lo) {
        scaled *= 10;
        ++exp;
    }
    mpz_class digits = scaled / q;
    mpz_class r = scaled % q;

    // Round half to even on the remainder r/q.
    bool inexact = sgn(r) != 0;
    mpz_class twice = 2 * r;
    if (twice > q || (twice == q && mpz_odd_p(digits.get_mpz_t()))) {
        digits += 1;
        if (digits == hi) {  // carried into one more significant digit
            if (exp == significant) {
                // The fraction rounded up to exactly 1.
                std::string whole = mpz_class(ipart + 1).get_str();
                whole += '.';
                for (int i = 0; i < significant - 1; ++i) whole += '0';
                whole += "…";
                return whole;
            }
            digits /= 10;
            --exp;
        }
    }

    std::string ds = digits.get_str();
    if (!inexact) {
        while (ds.size() > 1 && ds.back() == '0') ds.pop_back();
    }
    std::string out = ipart.get_str();
    out += '.';
    for (long i = 0; i < exp - significant; ++i) out += '0';
    out += ds;
    if (inexact) out += "…";
    return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.compact_str();
}

}  // namespace ubamc
