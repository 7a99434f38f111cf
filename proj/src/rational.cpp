#include "colmu/rational.hpp"

#include <stdexcept>

namespace colmu {

namespace {

BigInt parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("malformed number '" + s + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("malformed number '" + s + "'");
    return BigInt(s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text));
    BigInt n = parse_int(text.substr(0, slash));
    BigInt d = parse_int(text.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(n, d);
}

std::string format_rational(const Rational& q) {
    auto n = numerator(q);
    auto d = denominator(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

BigInt floor_of(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt r = n / d;  // truncates toward zero
    if (n < 0 && r * d != n) r -= 1;
    return r;
}

BigInt ceil_of(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt r = n / d;
    if (n > 0 && r * d != n) r += 1;
    return r;
}

}  // namespace colmu
