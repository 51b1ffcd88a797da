#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "gbasis/partition.hpp"

namespace gbasis {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;

    nlohmann::json to_json() const {
        return {{"suite", name}, {"pass", pass}, {"detail", detail}, {"seconds", seconds}};
    }
};

// Exhaustive decomposition sweep on [h, N]: every n decomposed, certificate
// verified, and (optionally) cross-checked against the bitset sumset oracle.
SuiteResult check_thm2_exhaustive(const Thm2Params& p, std::uint64_t N,
                                  bool with_oracle = true);

// Per-reachable-label sampling sweep: each sampled n must yield a verified
// certificate avoiding g^2.
SuiteResult check_thm1_sampling(const Thm1Params& p, unsigned samples_per_label,
                                std::uint64_t seed, std::uint64_t max_exponent);

// Mutated certificates must be rejected with the anticipated clause.
SuiteResult check_fault_injection(unsigned count, std::uint64_t seed);

// Pairwise disjointness of the enumerated digit sets for the residue cells.
SuiteResult check_lemma1a(unsigned h, std::uint64_t g, std::uint64_t N);

// Union over residue cells covers a tail [C, N] under the h-fold sumset.
SuiteResult check_lemma1c(unsigned h, std::uint64_t g, std::uint64_t N, std::uint64_t c_max);

// Round-trip, canonicity and counting-growth properties of the digit layer.
SuiteResult check_gadic_properties();

// Removability probe on a block-cyclic partition in the minimality regime
// (finite evidence only).
SuiteResult check_thmd_probe(std::uint64_t g, unsigned h, std::uint64_t t, std::uint64_t N,
                             std::uint64_t B);

// The block-cyclic partition used by the probe: cells 0..h-1 repeating in
// runs of length t.
PartitionSpec cyclic_block_partition(unsigned h, std::uint64_t t);

}  // namespace gbasis
