#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

namespace gbasis {

/// Membership of each n in [0, N]. Queries outside the bound throw rather
/// than silently answering false.
class BoundedBitset {
public:
    explicit BoundedBitset(std::uint64_t bound);

    std::uint64_t bound() const { return bound_; }
    bool test(std::uint64_t n) const;
    void set(std::uint64_t n, bool value = true);
    std::uint64_t count() const;
    std::vector<std::uint64_t> members() const;

    bool operator==(const BoundedBitset&) const = default;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    friend BoundedBitset add(const BoundedBitset&, const BoundedBitset&, std::uint64_t);

    std::uint64_t bound_;
    std::vector<std::uint64_t> words_;
};

// Bit n set iff n in A, for all n in [0, N].
BoundedBitset restrict_to(const std::function<bool(std::uint64_t)>& A, std::uint64_t N);

BoundedBitset from_members(const std::vector<std::uint64_t>& members, std::uint64_t N);

// Sumset {x + y <= N : x in X, y in Y}. Exact on [0, N]: summands of n <= N
// never exceed n, so truncation cannot produce false negatives.
BoundedBitset add(const BoundedBitset& X, const BoundedBitset& Y, std::uint64_t N);

// h-fold sumset hX on [0, N].
BoundedBitset hfold(const BoundedBitset& X, unsigned h, std::uint64_t N);

// r_h(X, n) for all n in [0, N] (ordered tuples), saturating at 2^64-1.
std::vector<std::uint64_t> rep_table(const BoundedBitset& X, unsigned h, std::uint64_t N);

std::uint64_t rep_count(const BoundedBitset& X, unsigned h, std::uint64_t n);

// E_a ∩ [0, N] = hA \ h(A\{a}) on [0, N]. Requires a in A.
std::vector<std::uint64_t> removability(const BoundedBitset& A, std::uint64_t a,
                                        unsigned h, std::uint64_t N);

struct RemovabilityProbe {
    std::uint64_t a;
    bool e_a_nonempty;
    std::optional<std::uint64_t> e_a_max;
    std::uint64_t e_a_count;
};

struct MinimalityReport {
    unsigned h;
    std::uint64_t N;
    std::uint64_t B;
    std::vector<RemovabilityProbe> probes;
    std::vector<std::uint64_t> non_minimal_candidates;  // empty E_a at this N
    // Finite computation cannot show E_a is infinite; nonempty probes are
    // evidence, empty ones only candidates.
    static constexpr const char* kCaveat = "evidence, not proof";

    nlohmann::json to_json() const;
};

// Probes E_a for every a in A ∩ [0, B].
MinimalityReport minimality_probe(const BoundedBitset& A, unsigned h, std::uint64_t N,
                                  std::uint64_t B);

struct SumsetReport {
    unsigned h;
    std::uint64_t N;
    std::optional<std::uint64_t> basis_threshold;  // least n0 with [n0, N] ⊆ hA
    std::vector<std::uint64_t> gaps;               // largest misses, capped
    std::uint64_t gap_count;

    nlohmann::json to_json() const;
};

SumsetReport summarize_hfold(const BoundedBitset& X, unsigned h, std::uint64_t N);

}  // namespace gbasis
