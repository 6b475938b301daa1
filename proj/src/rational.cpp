#include "kpeaks/rational.hpp"

#include <ostream>
#include <stdexcept>

#include "kpeaks/errors.hpp"

namespace kpeaks {

Rational::Rational(long num, long den) {
    if (den == 0) throw ZeroDenominator();
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (sgn(den) == 0) throw ZeroDenominator();
    v_ = mpq_class(num) / mpq_class(den);
}

Rational Rational::parse(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        return Rational(mpz_class(s), mpz_class(1));
    }
    if (slash == 0 || slash + 1 >= s.size() || s.find('/', slash + 1) != std::string::npos) {
        throw std::invalid_argument("malformed rational: " + s);
    }
    mpz_class num(s.substr(0, slash));
    mpz_class den(s.substr(slash + 1));
    return Rational(num, den);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero rational");
    v_ /= o.v_;
    return *this;
}

std::string Rational::str() const {
    return v_.get_str();  // "p" when denominator is 1, else "p/q"
}

Rational Rational::abs() const {
    return sign() < 0 ? -*this : *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

}  // namespace kpeaks
