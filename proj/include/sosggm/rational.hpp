#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace sosggm {

using rat = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline double to_double(const rat &x) { return x.convert_to<double>(); }

inline int sgn(const rat &x) { return x.sign(); }

inline rat rat_pow(const rat &x, unsigned e) {
    rat r = 1;
    rat b = x;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// decimal string -> exact rational, e.g. "3.25" -> 13/4, "5e-1" -> 1/2
inline rat rat_from_decimal(const std::string &s) {
    size_t i = 0;
    if (s.empty()) throw std::invalid_argument("empty number");
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = (s[i] == '-'), ++i;
    bigint mant = 0;
    long frac_digits = 0, expo = 0;
    bool any = false, in_frac = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            mant = mant * 10 + (c - '0');
            if (in_frac) ++frac_digits;
            any = true;
        } else if (c == '.' && !in_frac) {
            in_frac = true;
        } else if (c == 'e' || c == 'E') {
            expo = std::stol(s.substr(i + 1));
            break;
        } else {
            throw std::invalid_argument("bad number: " + s);
        }
    }
    if (!any) throw std::invalid_argument("bad number: " + s);
    rat r(mant);
    long p10 = expo - frac_digits;
    bigint ten = 10;
    for (long j = 0; j < (p10 > 0 ? p10 : -p10); ++j) {
        if (p10 > 0) r *= ten; else r /= ten;
    }
    return neg ? -r : r;
}

}
