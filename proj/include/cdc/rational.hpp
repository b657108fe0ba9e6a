/*
 * Copyright 2026 The coded-shuffle Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "cdc/error.hpp"

namespace cdc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

inline BigInt floor_of(const Rational& r) {
    BigInt num = numerator_of(r);
    BigInt den = denominator_of(r);
    BigInt quot = num / den;  // truncates toward zero
    if (num < 0 && quot * den != num) --quot;
    return quot;
}

inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Formats with `digits` significant digits, printf "%g" style.
inline std::string format_decimal(double value, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

inline std::string format_decimal(const Rational& r, int digits = 12) {
    return format_decimal(to_double(r), digits);
}

/// Rounds to `digits` significant digits; JSON writers emit the shortest round-trip form.
inline double round_significant(double value, int digits = 12) {
    return std::stod(format_decimal(value, digits));
}

inline std::string exact_string(const Rational& r) {
    if (is_integer(r)) return numerator_of(r).str();
    return numerator_of(r).str() + "/" + denominator_of(r).str();
}

/// Parses "p/q" or a plain integer into an exact rational.
inline Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> BigInt {
        if (s.empty()) throw InvalidArgument("empty number in rational '" + std::string(text) + "'");
        std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (start == s.size()) throw InvalidArgument("bad rational '" + std::string(text) + "'");
        for (std::size_t i = start; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw InvalidArgument("bad rational '" + std::string(text) + "'");
        }
        return BigInt(std::string(s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

inline std::int64_t to_int64(const BigInt& v) {
    if (v > BigInt(INT64_MAX) || v < BigInt(INT64_MIN)) throw InvalidArgument("integer " + v.str() + " out of range");
    return v.convert_to<std::int64_t>();
}

}  // namespace cdc
