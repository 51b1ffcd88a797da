#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gbasis/nat.hpp"

namespace gbasis {

// Membership predicate over digit positions. Finite sets and the partition
// module's infinite cells both plug in through this interface.
using PositionSet = std::function<bool(std::uint64_t)>;

struct GadicTerm {
    std::uint64_t exponent;
    std::uint64_t digit;  // in [1, g-1]; zero digits are never stored

    bool operator==(const GadicTerm&) const = default;
};

/// Canonical base-g representation: terms sorted by strictly decreasing
/// exponent, digits in [1, g-1]. The empty term list represents 0.
class GadicExpansion {
public:
    GadicExpansion(std::uint64_t base, std::vector<GadicTerm> terms);

    std::uint64_t base() const { return base_; }
    const std::vector<GadicTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Support F, largest exponent first (same order as terms()).
    std::vector<std::uint64_t> support() const;

private:
    std::uint64_t base_;
    std::vector<GadicTerm> terms_;
};

GadicExpansion expand(const Nat& n, std::uint64_t g);
Nat evaluate(const GadicExpansion& e);

// n >= 1 with support(expand(n, g)) contained in W.
bool is_member(const Nat& n, const PositionSet& W, std::uint64_t g);

// A_g(W) intersected with [1, N], ascending.
std::vector<std::uint64_t> enumerate_members(const PositionSet& W, std::uint64_t g,
                                             std::uint64_t N);

// |A_g(W) ∩ [1, x]|.
std::uint64_t count_members(const PositionSet& W, std::uint64_t g, std::uint64_t x);

}  // namespace gbasis
