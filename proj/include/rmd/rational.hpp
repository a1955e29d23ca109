#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rmd {

// Canonical exact scalar. cpp_rational keeps lowest terms and a positive
// denominator, which the serialization below relies on.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

// Malformed scenario input, bad flags, schema violations. CLI exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid request outside the implemented envelope
// (enumeration guards, missing preconditions). CLI exit code 3.
struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw InputError("rational with zero denominator");
    return Rational(Integer(num), Integer(den));
}

// Accepts "p/q", "p", optional leading sign on p; q must be positive.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { throw InputError("malformed rational '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    const auto slash = text.find('/');
    const std::string_view num_part = text.substr(0, slash == std::string_view::npos ? text.size() : slash);
    std::string_view den_part;
    if (slash != std::string_view::npos) {
        den_part = text.substr(slash + 1);
        if (den_part.empty()) fail();
    }
    auto check_digits = [&](std::string_view part, bool sign_ok) {
        if (part.empty()) fail();
        std::size_t i = 0;
        if (sign_ok && (part[0] == '-' || part[0] == '+')) i = 1;
        if (i == part.size()) fail();
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') fail();
    };
    check_digits(num_part, true);
    Integer num{std::string(num_part)};
    Integer den = 1;
    if (!den_part.empty()) {
        check_digits(den_part, false);
        den = Integer{std::string(den_part)};
        if (den == 0) fail();
    }
    return Rational(num, den);
}

// Serialized form is always "p/q" with q > 0, including "x/1", so reports
// are byte-stable and round-trip through parse_rational.
inline std::string to_string(const Rational& value) {
    return numerator(value).str() + "/" + denominator(value).str();
}

inline std::string to_string(const Vec& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += to_string(values[i]);
    }
    return out + "]";
}

inline Rational dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::logic_error("dot: size mismatch");
    Rational sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

inline Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::logic_error("sub: size mismatch");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::logic_error("add: size mismatch");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Vec scale(const Vec& a, const Rational& factor) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * factor;
    return out;
}

inline bool is_zero(const Rational& x) { return x == 0; }

inline bool is_zero(const Vec& a) {
    for (const auto& v : a)
        if (v != 0) return false;
    return true;
}

inline Rational sum(const Vec& a) {
    Rational s = 0;
    for (const auto& v : a) s += v;
    return s;
}

// Scales a rational vector to the unique primitive integer vector with the
// same direction (gcd of entries 1). Sign is preserved. Zero stays zero.
inline Vec primitive_direction(const Vec& a) {
    Integer den_lcm = 1;
    for (const auto& v : a) den_lcm = lcm(den_lcm, denominator(v));
    Integer num_gcd = 0;
    std::vector<Integer> nums(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        nums[i] = numerator(a[i]) * (den_lcm / denominator(a[i]));
        num_gcd = gcd(num_gcd, nums[i]);
    }
    Vec out(a.size(), Rational(0));
    if (num_gcd == 0) return out;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = Rational(nums[i] / num_gcd);
    return out;
}

// Lexicographic comparison used wherever a deterministic order over exact
// vectors is needed (vertex lists, canonical rows, witnesses).
inline bool lex_less(const Vec& a, const Vec& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

}  // namespace rmd
