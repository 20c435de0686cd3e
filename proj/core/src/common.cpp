#include "liftlab/bigint.hpp"
#include "liftlab/error.hpp"
#include "liftlab/guard.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace liftlab {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::SpanViolation: return "SpanViolation";
        case Errc::Inconsistent: return "Inconsistent";
        case Errc::IncompleteAssignment: return "IncompleteAssignment";
        case Errc::EmptySet: return "EmptySet";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::TooLarge: return "TooLarge";
        case Errc::GuardExceeded: return "GuardExceeded";
        case Errc::ParamViolation: return "ParamViolation";
        case Errc::NotPowerOfTwo: return "NotPowerOfTwo";
        case Errc::EmptyState: return "EmptyState";
        case Errc::WidthOverflow: return "WidthOverflow";
        case Errc::MalformedProof: return "MalformedProof";
        case Errc::SourceInvalid: return "SourceInvalid";
        case Errc::ParseError: return "ParseError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

void Guard::require(std::string_view what, double log2_cost, double log2_limit) const {
    if (log2_cost <= log2_limit) return;
    std::ostringstream msg;
    msg << what << ": estimated cost 2^" << log2_cost << " exceeds limit 2^" << log2_limit;
    if (!force) throw Error(Errc::GuardExceeded, msg.str() + " (use --force or LIFTLAB_GUARD_OVERRIDE=1)");
    std::cerr << "warning: guard overridden: " << msg.str() << '\n';
}

Guard Guard::from_env(bool force_flag) {
    const char* env = std::getenv("LIFTLAB_GUARD_OVERRIDE");
    return Guard{force_flag || (env != nullptr && std::string_view(env) == "1")};
}

BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

double log2_big(const BigInt& v) {
    if (v <= 0) return -INFINITY;
    const auto bits = static_cast<long>(boost::multiprecision::msb(v));
    if (bits < 52) return std::log2(v.convert_to<double>());
    const long shift = bits - 52;
    const BigInt top = v >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

Rational parse_rational(const std::string& text) {
    auto fail = [&] { throw Error(Errc::ParseError, "not a rational number: '" + text + "'"); };
    if (text.empty()) fail();
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt p(text.substr(0, slash));
            BigInt q(text.substr(slash + 1));
            if (q == 0) fail();
            return Rational(p, q);
        }
        const auto dot = text.find('.');
        if (dot == std::string::npos) return Rational(BigInt(text));
        const std::string frac = text.substr(dot + 1);
        const std::string whole = text.substr(0, dot);
        if (frac.empty() && whole.empty()) fail();
        for (char c : frac)
            if (c < '0' || c > '9') fail();
        BigInt scale = ipow(BigInt(10), static_cast<unsigned>(frac.size()));
        const bool neg = !whole.empty() && whole[0] == '-';
        BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : BigInt(whole);
        BigInt f = frac.empty() ? BigInt(0) : BigInt(frac);
        BigInt num = boost::multiprecision::abs(w) * scale + f;
        return Rational(neg ? -num : num, scale);
    } catch (const std::runtime_error&) {
        fail();
    }
    return {};
}

std::string to_string(const Rational& r) {
    const BigInt p = boost::multiprecision::numerator(r);
    const BigInt q = boost::multiprecision::denominator(r);
    if (q == 1) return p.str();
    return p.str() + "/" + q.str();
}

BigInt floor_of(const Rational& r) {
    const BigInt p = boost::multiprecision::numerator(r);
    const BigInt q = boost::multiprecision::denominator(r);
    BigInt f = p / q;
    if (p < 0 && f * q != p) f -= 1;
    return f;
}

BigInt ceil_of(const Rational& r) {
    const BigInt f = floor_of(r);
    return Rational(f) == r ? f : f + 1;
}

}  // namespace liftlab
