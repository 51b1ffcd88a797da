#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace gbasis {

// Arbitrary-precision nonnegative integer. All library-level arithmetic on
// values of the sets under study goes through this type; native 64-bit ints
// are reserved for digit positions, cell indices and bitset bounds.
using Nat = mpz_class;

// g^e for machine-sized g and e.
inline Nat nat_pow(std::uint64_t base, std::uint64_t exp) {
    Nat r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline std::string to_decimal(const Nat& n) { return n.get_str(10); }

// Parses a decimal string; rejects signs, whitespace and exponent notation.
inline Nat nat_from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty decimal string");
    for (char c : s)
        if (c < '0' || c > '9')
            throw std::invalid_argument("not a nonnegative decimal integer: " + s);
    return Nat(s, 10);
}

inline std::uint64_t to_u64(const Nat& n) {
    if (!n.fits_ulong_p()) throw std::overflow_error("value does not fit in 64 bits");
    return n.get_ui();
}

}  // namespace gbasis
