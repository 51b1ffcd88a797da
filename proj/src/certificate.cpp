#include <algorithm>
#include <map>

#include "gbasis/decompose.hpp"
#include "gbasis/errors.hpp"
#include "gbasis/gadic.hpp"

namespace gbasis {

namespace {

nlohmann::json nat_list(const std::vector<Nat>& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : xs) a.push_back(to_decimal(x));
    return a;
}

}  // namespace

nlohmann::json TraceStep::to_json() const {
    nlohmann::json j{{"label", label}, {"target", to_decimal(target)}};
    auto put = [&](const char* name, const std::optional<std::uint64_t>& v) {
        if (v) j[name] = *v;
    };
    put("k", k);
    put("i", i);
    put("u", u);
    put("v", v);
    put("s", s);
    put("q", q);
    put("l", l);
    if (!f.empty()) j["f"] = f;
    if (!groups.empty()) j["groups"] = groups;
    if (subtracted) j["subtracted"] = to_decimal(*subtracted);
    if (!b.empty()) j["b"] = nat_list(b);
    if (!b_prime.empty()) j["b_prime"] = nat_list(b_prime);
    if (!r.empty()) j["r"] = r;
    if (!c.empty()) j["c"] = nat_list(c);
    return j;
}

nlohmann::json DecompositionTrace::to_json() const {
    nlohmann::json steps_json = nlohmann::json::array();
    for (const auto& s : steps) steps_json.push_back(s.to_json());
    return {{"case", case_label}, {"steps", steps_json}};
}

std::vector<Nat> DecompositionCertificate::sorted_parts() const {
    auto sorted = parts;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

nlohmann::json DecompositionCertificate::to_json() const {
    nlohmann::json j{{"n", to_decimal(n)},
                     {"g", g},
                     {"h", h},
                     {"parts", nat_list(parts)},
                     {"part_cells", part_cells},
                     {"trace", trace.to_json()}};
    j["forbidden"] = forbidden ? nlohmann::json(to_decimal(*forbidden)) : nlohmann::json(nullptr);
    return j;
}

std::vector<std::vector<std::uint64_t>> split_groups(
    const std::vector<std::uint64_t>& exponents, const PartitionSpec& cells,
    unsigned parts_needed) {
    check_invariant(parts_needed >= 1, "split_groups: parts_needed >= 1");
    check_invariant(exponents.size() >= parts_needed,
                    "split_groups: fewer exponents (" + std::to_string(exponents.size()) +
                        ") than groups needed (" + std::to_string(parts_needed) + ")");

    // Per-exponent singletons, bucketed by cell; groups inside a bucket are
    // kept sorted by smallest exponent so merges are deterministic.
    std::map<unsigned, std::vector<std::vector<std::uint64_t>>> buckets;
    for (std::uint64_t e : exponents) {
        const unsigned c = cells.cell_at(e);
        check_invariant(c >= 1, "split_groups: exponent " + std::to_string(e) +
                                    " lies in cell 0");
        buckets[c].push_back({e});
    }
    for (auto& [c, groups] : buckets)
        std::sort(groups.begin(), groups.end());

    std::size_t count = exponents.size();
    while (count > parts_needed) {
        bool merged = false;
        for (auto& [c, groups] : buckets) {
            if (groups.size() >= 2) {
                // merge the two groups with the lowest exponents
                auto& dst = groups[0];
                dst.insert(dst.end(), groups[1].begin(), groups[1].end());
                std::sort(dst.begin(), dst.end());
                groups.erase(groups.begin() + 1);
                --count;
                merged = true;
                break;
            }
        }
        if (!merged)
            throw InvariantViolation(
                "split_groups: exponents span " + std::to_string(count) +
                " distinct cells, cannot form " + std::to_string(parts_needed) +
                " single-cell groups");
    }

    std::vector<std::vector<std::uint64_t>> out;
    for (auto& [c, groups] : buckets)
        for (auto& grp : groups) out.push_back(std::move(grp));
    // Display order: largest leading exponent first.
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return *std::max_element(a.begin(), a.end()) > *std::max_element(b.begin(), b.end());
    });
    return out;
}

VerifyResult verify_certificate(const DecompositionCertificate& cert,
                                const PartitionSpec& spec, std::uint64_t g) {
    auto fail = [](std::string msg) { return VerifyResult{false, std::move(msg)}; };

    if (cert.h != spec.cell_count())
        return fail("part-count: certificate h=" + std::to_string(cert.h) +
                    " does not match partition h=" + std::to_string(spec.cell_count()));
    if (cert.parts.size() != cert.h)
        return fail("part-count: expected " + std::to_string(cert.h) + " parts, got " +
                    std::to_string(cert.parts.size()));
    if (cert.part_cells.size() != cert.parts.size())
        return fail("part-count: part_cells length mismatch");

    for (std::size_t idx = 0; idx < cert.parts.size(); ++idx)
        if (cert.parts[idx] < 1)
            return fail("part-positive: part " + std::to_string(idx) + " is " +
                        to_decimal(cert.parts[idx]));

    Nat sum(0);
    for (const auto& p : cert.parts) sum += p;
    if (sum != cert.n)
        return fail("sum: parts total " + to_decimal(sum) + " != n = " + to_decimal(cert.n));

    for (std::size_t idx = 0; idx < cert.parts.size(); ++idx) {
        const auto e = expand(cert.parts[idx], g);
        const auto cell = spec.uniform_cell(e);
        if (!cell)
            return fail("single-cell-support: part " + std::to_string(idx) + " (" +
                        to_decimal(cert.parts[idx]) + ") has support crossing cells");
        if (*cell != cert.part_cells[idx])
            return fail("single-cell-support: part " + std::to_string(idx) +
                        " lies in cell " + std::to_string(*cell) + ", certificate says " +
                        std::to_string(cert.part_cells[idx]));
    }

    if (cert.forbidden)
        for (std::size_t idx = 0; idx < cert.parts.size(); ++idx)
            if (cert.parts[idx] == *cert.forbidden)
                return fail("forbidden: part " + std::to_string(idx) +
                            " equals the removed element " + to_decimal(*cert.forbidden));

    return VerifyResult{true, ""};
}

}  // namespace gbasis
