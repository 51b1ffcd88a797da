#include "gbasis/gadic.hpp"

#include <algorithm>
#include <limits>

#include "gbasis/errors.hpp"

namespace gbasis {

namespace {

void require_base(std::uint64_t g) {
    if (g < 2) throw ParamError("invalid base: g >= 2 required, got g=" + std::to_string(g));
}

// Largest k with g^k < 2^63, and that power. Remainders of division by the
// chunk then fit a machine word.
std::pair<unsigned, std::uint64_t> chunk_power(std::uint64_t g) {
    const std::uint64_t limit = std::uint64_t(1) << 63;
    unsigned k = 1;
    std::uint64_t p = g;
    while (p < limit / g) {
        p *= g;
        ++k;
    }
    return {k, p};
}

}  // namespace

GadicExpansion::GadicExpansion(std::uint64_t base, std::vector<GadicTerm> terms)
    : base_(base), terms_(std::move(terms)) {
    require_base(base_);
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    bool first = true;
    for (const auto& t : terms_) {
        if (t.digit < 1 || t.digit > base_ - 1)
            throw std::invalid_argument("digit out of [1, g-1]");
        if (!first && t.exponent >= prev)
            throw std::invalid_argument("exponents not strictly decreasing");
        prev = t.exponent;
        first = false;
    }
}

std::vector<std::uint64_t> GadicExpansion::support() const {
    std::vector<std::uint64_t> f;
    f.reserve(terms_.size());
    for (const auto& t : terms_) f.push_back(t.exponent);
    return f;
}

GadicExpansion expand(const Nat& n, std::uint64_t g) {
    require_base(g);
    if (sgn(n) < 0) throw std::invalid_argument("expand: negative input");

    std::vector<GadicTerm> rev;  // ascending exponents, reversed at the end

    if (g <= 36) {
        // GMP's radix conversion is the same repeated division, done
        // subquadratically; required for the ~10^5-digit operands the
        // g=3 gapped-block runs produce.
        const std::string s = n.get_str(static_cast<int>(g));
        std::uint64_t e = 0;
        for (auto it = s.rbegin(); it != s.rend(); ++it, ++e) {
            const char c = *it;
            const std::uint64_t d = (c >= '0' && c <= '9') ? std::uint64_t(c - '0')
                                                           : std::uint64_t(c - 'a') + 10;
            if (d != 0) rev.push_back({e, d});
        }
        if (n == 0) rev.clear();
    } else {
        const auto [per_chunk, chunk] = chunk_power(g);
        Nat rest = n;
        Nat q;
        std::uint64_t e = 0;
        while (rest != 0) {
            const std::uint64_t r =
                mpz_fdiv_q_ui(q.get_mpz_t(), rest.get_mpz_t(), chunk);
            std::uint64_t part = r;
            for (unsigned j = 0; j < per_chunk; ++j) {
                const std::uint64_t d = part % g;
                if (d != 0) rev.push_back({e + j, d});
                part /= g;
            }
            e += per_chunk;
            swap(rest, q);
        }
    }

    std::reverse(rev.begin(), rev.end());
    return GadicExpansion(g, std::move(rev));
}

Nat evaluate(const GadicExpansion& e) {
    if (e.is_zero()) return Nat(0);
    // Horner over the gaps between consecutive exponents.
    const auto& ts = e.terms();
    Nat v(0);
    std::uint64_t prev = ts.front().exponent;
    for (const auto& t : ts) {
        if (&t != &ts.front()) v *= nat_pow(e.base(), prev - t.exponent);
        v += t.digit;
        prev = t.exponent;
    }
    v *= nat_pow(e.base(), ts.back().exponent);
    return v;
}

bool is_member(const Nat& n, const PositionSet& W, std::uint64_t g) {
    require_base(g);
    if (n < 1) return false;  // F must be nonempty
    for (std::uint64_t f : expand(n, g).support())
        if (!W(f)) return false;
    return true;
}

namespace {

// Depth-first walk over supports within [0, floor(log_g N)], highest position
// first, pruning as soon as the running value exceeds N. Visits each member
// exactly once (digit 0 = position unused), so the cost is proportional to
// the answer, not to N, when W is sparse.
template <typename Emit>
void walk_members(const std::vector<std::uint64_t>& positions, std::uint64_t g,
                  std::uint64_t N, std::size_t idx, std::uint64_t value, Emit&& emit) {
    if (idx == positions.size()) {
        if (value >= 1) emit(value);
        return;
    }
    const std::uint64_t p = positions[idx];
    // g^p <= N is guaranteed for every listed position, so the power fits.
    std::uint64_t pw = 1;
    for (std::uint64_t j = 0; j < p; ++j) pw *= g;
    for (std::uint64_t d = 0; d <= g - 1; ++d) {
        if (d > 0 && (N - value) / pw < d) break;  // value + d*pw > N
        walk_members(positions, g, N, idx + 1, value + d * pw, emit);
    }
}

std::vector<std::uint64_t> member_positions(const PositionSet& W, std::uint64_t g,
                                            std::uint64_t N) {
    std::vector<std::uint64_t> ps;
    std::uint64_t pw = 1;
    for (std::uint64_t p = 0; pw <= N; ++p) {
        if (W(p)) ps.push_back(p);
        if (pw > N / g) break;
        pw *= g;
    }
    std::reverse(ps.begin(), ps.end());
    return ps;
}

}  // namespace

std::vector<std::uint64_t> enumerate_members(const PositionSet& W, std::uint64_t g,
                                             std::uint64_t N) {
    require_base(g);
    if (N < 1) throw std::invalid_argument("enumerate_members: N >= 1 required");
    std::vector<std::uint64_t> out;
    walk_members(member_positions(W, g, N), g, N, 0, 0,
                 [&](std::uint64_t v) { out.push_back(v); });
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_members(const PositionSet& W, std::uint64_t g, std::uint64_t x) {
    require_base(g);
    if (x < 1) throw std::invalid_argument("count_members: x >= 1 required");
    if (x < 10'000'000) return enumerate_members(W, g, x).size();
    std::uint64_t n = 0;
    walk_members(member_positions(W, g, x), g, x, 0, 0, [&](std::uint64_t) { ++n; });
    return n;
}

}  // namespace gbasis
