#include "gbasis/sumset.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

#include "gbasis/errors.hpp"

namespace gbasis {

namespace {
constexpr std::uint64_t kWordBits = 64;

std::uint64_t words_for(std::uint64_t bound) { return bound / kWordBits + 1; }

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t s = a + b;
    return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}
}  // namespace

BoundedBitset::BoundedBitset(std::uint64_t bound)
    : bound_(bound), words_(words_for(bound), 0) {}

bool BoundedBitset::test(std::uint64_t n) const {
    if (n > bound_)
        throw std::out_of_range("bitset query " + std::to_string(n) + " beyond bound " +
                                std::to_string(bound_));
    return (words_[n / kWordBits] >> (n % kWordBits)) & 1;
}

void BoundedBitset::set(std::uint64_t n, bool value) {
    if (n > bound_)
        throw std::out_of_range("bitset update " + std::to_string(n) + " beyond bound " +
                                std::to_string(bound_));
    const std::uint64_t mask = std::uint64_t(1) << (n % kWordBits);
    if (value)
        words_[n / kWordBits] |= mask;
    else
        words_[n / kWordBits] &= ~mask;
}

std::uint64_t BoundedBitset::count() const {
    std::uint64_t c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
}

std::vector<std::uint64_t> BoundedBitset::members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t wi = 0; wi < words_.size(); ++wi) {
        std::uint64_t w = words_[wi];
        while (w) {
            out.push_back(wi * kWordBits + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

BoundedBitset restrict_to(const std::function<bool(std::uint64_t)>& A, std::uint64_t N) {
    BoundedBitset b(N);
    for (std::uint64_t n = 0; n <= N; ++n)
        if (A(n)) b.set(n);
    return b;
}

BoundedBitset from_members(const std::vector<std::uint64_t>& members, std::uint64_t N) {
    BoundedBitset b(N);
    for (std::uint64_t m : members)
        if (m <= N) b.set(m);
    return b;
}

BoundedBitset add(const BoundedBitset& X, const BoundedBitset& Y, std::uint64_t N) {
    if (X.bound() < N || Y.bound() < N)
        throw std::invalid_argument("add: operand bound below N");
    // Addition commutes; iterate the sparser operand's bits.
    if (X.count() > Y.count()) return add(Y, X, N);
    BoundedBitset out(N);
    auto& ow = out.words_;
    const auto& yw = Y.words();
    const std::uint64_t nwords = ow.size();
    // Shifted-OR of Y by every set bit x of X, truncated at N.
    for (std::uint64_t x : X.members()) {
        if (x > N) break;
        const std::uint64_t word_shift = x / kWordBits;
        const unsigned bit_shift = x % kWordBits;
        for (std::uint64_t i = nwords; i-- > word_shift;) {
            std::uint64_t v = yw[i - word_shift] << bit_shift;
            if (bit_shift && i > word_shift) v |= yw[i - word_shift - 1] >> (kWordBits - bit_shift);
            ow[i] |= v;
        }
    }
    // Clear bits above N in the top word.
    const unsigned top = N % kWordBits;
    if (top != kWordBits - 1) ow.back() &= (std::uint64_t(1) << (top + 1)) - 1;
    return out;
}

BoundedBitset hfold(const BoundedBitset& X, unsigned h, std::uint64_t N) {
    if (h < 1) throw std::invalid_argument("hfold: h >= 1 required");
    if (X.bound() < N) throw std::invalid_argument("hfold: X.bound below N");
    BoundedBitset acc(N);
    for (std::uint64_t x : X.members()) {
        if (x > N) break;
        acc.set(x);
    }
    BoundedBitset result = acc;
    for (unsigned step = 1; step < h; ++step) result = add(result, acc, N);
    return result;
}

std::vector<std::uint64_t> rep_table(const BoundedBitset& X, unsigned h, std::uint64_t N) {
    if (h < 1) throw std::invalid_argument("rep_table: h >= 1 required");
    if (X.bound() < N) throw std::invalid_argument("rep_table: X.bound below N");
    const auto xs = X.members();
    std::vector<std::uint64_t> cur(N + 1, 0);
    for (std::uint64_t x : xs)
        if (x <= N) cur[x] = 1;
    for (unsigned step = 1; step < h; ++step) {
        std::vector<std::uint64_t> next(N + 1, 0);
        for (std::uint64_t x : xs) {
            if (x > N) break;
            for (std::uint64_t n = x; n <= N; ++n)
                if (cur[n - x]) next[n] = sat_add(next[n], cur[n - x]);
        }
        cur = std::move(next);
    }
    return cur;
}

std::uint64_t rep_count(const BoundedBitset& X, unsigned h, std::uint64_t n) {
    if (n > X.bound())
        throw std::out_of_range("rep_count: n beyond bitset bound");
    return rep_table(X, h, n)[n];
}

std::vector<std::uint64_t> removability(const BoundedBitset& A, std::uint64_t a,
                                        unsigned h, std::uint64_t N) {
    if (a > A.bound() || !A.test(a))
        throw std::invalid_argument("removability: a = " + std::to_string(a) +
                                    " is not a member of A");
    const BoundedBitset full = hfold(A, h, N);
    BoundedBitset without = A;
    without.set(a, false);
    const BoundedBitset reduced = hfold(without, h, N);
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 0; n <= N; ++n)
        if (full.test(n) && !reduced.test(n)) out.push_back(n);
    return out;
}

MinimalityReport minimality_probe(const BoundedBitset& A, unsigned h, std::uint64_t N,
                                  std::uint64_t B) {
    if (B > N) throw std::invalid_argument("minimality_probe: B <= N required");
    if (A.bound() < N) throw std::invalid_argument("minimality_probe: A.bound below N");
    MinimalityReport rep{h, N, B, {}, {}};
    const BoundedBitset full = hfold(A, h, N);
    for (std::uint64_t a : A.members()) {
        if (a > B) break;
        BoundedBitset without = A;
        without.set(a, false);
        const BoundedBitset reduced = hfold(without, h, N);
        RemovabilityProbe probe{a, false, std::nullopt, 0};
        for (std::uint64_t n = 0; n <= N; ++n) {
            if (full.test(n) && !reduced.test(n)) {
                probe.e_a_nonempty = true;
                probe.e_a_max = n;
                probe.e_a_count += 1;
            }
        }
        if (!probe.e_a_nonempty) rep.non_minimal_candidates.push_back(a);
        rep.probes.push_back(probe);
    }
    return rep;
}

nlohmann::json MinimalityReport::to_json() const {
    nlohmann::json probes_json = nlohmann::json::array();
    for (const auto& p : probes) {
        nlohmann::json e{{"a", p.a},
                         {"e_a_nonempty", p.e_a_nonempty},
                         {"e_a_count", p.e_a_count}};
        e["e_a_max"] = p.e_a_max ? nlohmann::json(*p.e_a_max) : nlohmann::json(nullptr);
        probes_json.push_back(e);
    }
    return {{"h", h},
            {"N", N},
            {"B", B},
            {"note", kCaveat},
            {"probes", probes_json},
            {"non_minimal_candidates", non_minimal_candidates}};
}

SumsetReport summarize_hfold(const BoundedBitset& X, unsigned h, std::uint64_t N) {
    const BoundedBitset fold = hfold(X, h, N);
    SumsetReport rep{h, N, std::nullopt, {}, 0};
    std::optional<std::uint64_t> last_miss;
    for (std::uint64_t n = 0; n <= N; ++n) {
        if (!fold.test(n)) {
            last_miss = n;
            rep.gap_count += 1;
            rep.gaps.push_back(n);
        }
    }
    constexpr std::size_t kGapCap = 64;
    if (rep.gaps.size() > kGapCap)
        rep.gaps.erase(rep.gaps.begin(), rep.gaps.end() - kGapCap);
    if (!last_miss)
        rep.basis_threshold = 0;
    else if (*last_miss < N)
        rep.basis_threshold = *last_miss + 1;
    return rep;
}

nlohmann::json SumsetReport::to_json() const {
    nlohmann::json j{{"h", h}, {"N", N}, {"gaps", gaps}, {"gap_count", gap_count}};
    j["basis_threshold"] =
        basis_threshold ? nlohmann::json(*basis_threshold) : nlohmann::json(nullptr);
    return j;
}

}  // namespace gbasis
