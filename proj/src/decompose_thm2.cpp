#include <algorithm>
#include <map>

#include "gbasis/decompose.hpp"
#include "gbasis/errors.hpp"
#include "gbasis/gadic.hpp"

namespace gbasis {

namespace {

// Part under construction: sparse digit vector plus its value. All mutations
// preserve canonical digits (each in [1, g-1]); carries are explicit and
// single-step by the construction's own bounds.
struct Part {
    std::map<std::uint64_t, std::uint64_t> digits;
    Nat value;

    std::uint64_t max_exponent() const {
        check_invariant(!digits.empty(), "empty part queried for max exponent");
        return digits.rbegin()->first;
    }

    void add_fresh(std::uint64_t pos, std::uint64_t amount, std::uint64_t g) {
        check_invariant(amount >= 1 && amount <= g - 1, "digit amount out of range");
        const auto [it, inserted] = digits.emplace(pos, amount);
        check_invariant(inserted, "digit collision at position " + std::to_string(pos));
        value += amount * nat_pow(g, pos);
    }
};

Part make_part(const Nat& n, std::uint64_t g) {
    Part p;
    p.value = n;
    const auto e = expand(n, g);
    for (const auto& t : e.terms()) p.digits[t.exponent] = t.digit;
    return p;
}

struct Rec {
    const Thm2Params& p;
    const PartitionSpec& spec;
    std::vector<TraceStep>& steps;

    std::uint64_t g() const { return p.g; }
    unsigned h() const { return p.h; }

    std::vector<Part> run(const Nat& n, unsigned depth);
};

std::vector<Part> Rec::run(const Nat& n, unsigned depth) {
    check_invariant(depth < 100000, "recursion depth runaway");
    check_invariant(n >= h(), "recursion reached n < h");
    const std::uint64_t G = g();
    const Nat base_top = Nat(h()) + G * (G - 1);

    if (n <= base_top) {
        TraceStep step;
        step.target = n;
        std::vector<Part> parts;
        if (n == h()) {
            step.label = "base-h";
            for (unsigned j = 0; j < h(); ++j) parts.push_back(make_part(1, G));
        } else {
            // n = h + i = (h-1) * 1 + (i+1), 1 <= i <= g(g-1)
            step.label = "base-h+i";
            const std::uint64_t i = to_u64(n - h());
            step.i = i;
            for (unsigned j = 0; j + 1 < h(); ++j) parts.push_back(make_part(1, G));
            parts.push_back(make_part(i + 1, G));
        }
        steps.push_back(std::move(step));
        return parts;
    }

    const Nat n_h = n - h();

    // (g-1) g^{mk} <= n-h < (g-1) g^{m(k+1)}, then refine by single powers:
    // (g-1) g^{mk+i} <= n-h < (g-1) g^{mk+i+1}.
    const Nat step_m = nat_pow(G, p.m);
    std::uint64_t k = 0;
    Nat pw = Nat(G - 1);
    while (pw * step_m <= n_h) {
        pw *= step_m;
        ++k;
    }
    std::uint64_t i = 0;
    while (pw * G <= n_h) {
        pw *= G;
        ++i;
    }
    check_invariant(i <= p.m - 1, "digit offset i exceeded m-1");
    check_invariant(k > 0 || i > 0, "mk+i >= 1 violated");
    const std::uint64_t mk = p.m * k;
    // pw == (g-1) g^{mk+i}
    check_invariant(n - pw >= h(), "n - (g-1)g^{mk+i} >= h violated");
    check_invariant(n - pw < Nat(G - 1) * pw + h(), "(23) upper bound violated");

    const std::size_t step_idx = steps.size();

    if (i <= p.m - p.t - 1) {
        // Case 1: recurse on n - (g-1) g^{mk+i}, repair one part (or g-1 of
        // them at the cell boundary offset i = m-t-1).
        TraceStep step;
        step.target = n;
        step.k = k;
        step.i = i;
        step.subtracted = pw;
        step.label = i <= p.m - p.t - 2 ? "1.1" : "1.2";
        steps.push_back(std::move(step));

        const Nat rest = n - pw;
        check_invariant(rest < n, "recursion amount not strictly decreasing");
        auto parts = run(rest, depth + 1);

        const std::uint64_t pos = mk + i;
        const Nat threshold = Nat(G - 1) * nat_pow(G, pos);
        if (i <= p.m - p.t - 2) {
            // one part below (g-1) g^{mk+i} must exist
            auto it = std::find_if(parts.begin(), parts.end(),
                                   [&](const Part& a) { return a.value < threshold; });
            check_invariant(it != parts.end(),
                            "no part below (g-1)g^{mk+i}; contradicts (23)");
            Part& a = *it;
            if (!a.digits.empty() && a.max_exponent() == pos) {
                // a + (g-1)g^pos = (digit-1) g^pos + g^{pos+1}
                const std::uint64_t d = a.digits[pos];
                check_invariant(d <= G - 2, "top digit too large for the carry rewrite");
                a.digits.erase(pos);
                if (d > 1) a.digits[pos] = d - 1;
                a.value -= nat_pow(G, pos);
                a.add_fresh(pos + 1, 1, G);
            } else {
                check_invariant(a.digits.empty() || a.max_exponent() < pos,
                                "part exceeds the repair position");
                a.add_fresh(pos, G - 1, G);
            }
        } else {
            // i = m-t-1: at least g-1 parts below the threshold each absorb
            // one g^{mk+m-t-1}
            std::size_t repaired = 0;
            for (auto& a : parts) {
                if (repaired == G - 1) break;
                if (a.value >= threshold) continue;
                if (!a.digits.empty() && a.max_exponent() == pos) {
                    const std::uint64_t d = a.digits[pos];
                    check_invariant(d <= G - 2, "digit at mk+m-t-1 must be < g-1");
                    a.digits[pos] = d + 1;
                    a.value += nat_pow(G, pos);
                } else {
                    a.add_fresh(pos, 1, G);
                }
                ++repaired;
            }
            check_invariant(repaired == G - 1,
                            "fewer than g-1 parts below (g-1)g^{mk+m-t-1}");
        }
        return parts;
    }

    // Case 2: m-t <= i <= m-1. Locate u with h(g-1)g^{mk+u} <= n-h.
    TraceStep step;
    step.target = n;
    step.k = k;
    step.i = i;

    Nat upw = Nat(h()) * (G - 1) * nat_pow(G, mk);
    check_invariant(upw <= n_h, "h(g-1)g^{mk} <= n-h violated");
    std::uint64_t u = 0;
    while (upw * G <= n_h) {
        upw *= G;
        ++u;
    }
    check_invariant(u >= 2, "u = " + std::to_string(u) +
                                " below 2; the derivation excludes u <= 1");
    check_invariant(u <= p.m - p.t - 1, "u > m-t-1 violated");
    step.u = u;
    // mk+u and its neighbours stay inside the cell-0 offsets
    check_invariant(spec.cell_at(mk + u) == 0, "mk+u left cell 0");

    if (u == p.m - p.t - 1) {
        // Subcase 2.1: peel the tail sum h(g-1)(g^{mk+v} + ... + g^{mk+m-t-1}),
        // then s(g-1)g^{mk+v-1}, recurse, and split the stripped digits.
        std::vector<Nat> tail_terms;  // index j = 2 .. m-t-1
        Nat tail_total(0);
        for (std::uint64_t j = 2; j <= p.m - p.t - 1; ++j)
            tail_total += Nat(h()) * (G - 1) * nat_pow(G, mk + j);
        check_invariant(n_h < tail_total, "n-h below the full tail sum violated");

        std::uint64_t v = p.m - p.t - 1;
        Nat suffix = Nat(h()) * (G - 1) * nat_pow(G, mk + v);
        check_invariant(suffix <= n_h, "(24) lower bound violated at v = m-t-1");
        while (v > 3) {
            const Nat wider = suffix + Nat(h()) * (G - 1) * nat_pow(G, mk + v - 1);
            if (wider > n_h) break;
            suffix = wider;
            --v;
        }
        check_invariant(v >= 3 && v <= p.m - p.t - 1, "v outside [3, m-t-1]");
        step.v = v;

        const Nat X = nat_pow(G, mk + v - 1);
        const Nat rem = n_h - suffix;
        const Nat sX = Nat(G - 1) * X;
        const Nat s_nat = rem / sX;
        check_invariant(s_nat <= h() - 1, "s > h-1 violated");
        const std::uint64_t s = to_u64(s_nat);
        step.s = s;

        const Nat rest = n - s_nat * sX - suffix;
        check_invariant(rest >= h() && rest < sX + h(), "(3.8) violated");
        check_invariant(rest < n, "recursion amount not strictly decreasing");
        step.subtracted = n - rest;
        steps.push_back(std::move(step));

        auto parts = run(rest, depth + 1);

        // strip digits at mk+v-1 from the parts >= X (at most g-1 of them)
        std::vector<std::size_t> big;
        for (std::size_t idx = 0; idx < parts.size(); ++idx) {
            check_invariant(parts[idx].value < X * G, "(3.10) b_j < g^{mk+v} violated");
            if (parts[idx].value >= X) big.push_back(idx);
        }
        check_invariant(big.size() <= G - 1, "more than g-1 parts >= g^{mk+v-1}");

        // display order: stripped parts first
        std::vector<Part> ordered;
        std::vector<std::uint64_t> r_digits;
        for (std::size_t idx : big) ordered.push_back(std::move(parts[idx]));
        for (std::size_t idx = 0; idx < parts.size(); ++idx)
            if (std::find(big.begin(), big.end(), idx) == big.end())
                ordered.push_back(std::move(parts[idx]));

        auto& trace_step = steps[step_idx];
        trace_step.l = big.size();
        std::uint64_t r_sum = 0;
        for (std::size_t j = 0; j < ordered.size(); ++j) {
            trace_step.b.push_back(ordered[j].value);
            if (j < big.size()) {
                Part& part = ordered[j];
                const auto it = part.digits.find(mk + v - 1);
                check_invariant(it != part.digits.end(), "big part missing digit at mk+v-1");
                const std::uint64_t r = it->second;
                part.digits.erase(it);
                part.value -= r * X;
                r_digits.push_back(r);
                r_sum += r;
                trace_step.b_prime.push_back(part.value);
            }
        }
        trace_step.r = r_digits;
        check_invariant(r_sum <= G - 1, "r_1 + ... + r_l > g-1 violated");

        // digit budget at mk+v-1: r_sum to part 1, g-1 to parts 2..s+1; the
        // tail run goes to every part
        if (r_sum > 0) ordered[0].add_fresh(mk + v - 1, r_sum, G);
        for (std::uint64_t j = 1; j <= s; ++j) ordered[j].add_fresh(mk + v - 1, G - 1, G);
        for (auto& part : ordered)
            for (std::uint64_t j = v; j <= p.m - p.t - 1; ++j)
                part.add_fresh(mk + j, G - 1, G);
        return ordered;
    }

    // Subcase 2.2: 2 <= u <= m-t-2. Peel s(g-1)g^{mk+u+1} + q g^{mk+u}.
    check_invariant(u <= p.m - p.t - 2, "subcase split on u failed");
    const Nat Y = nat_pow(G, mk + u);
    const Nat gY = Y * G;
    const Nat s_quot = n_h / (Nat(G - 1) * gY);
    check_invariant(s_quot >= nat_pow(G, p.t - 1) * (G - 1),
                    "s >= g^{t-1}(g-1) violated");
    check_invariant(s_quot <= h() - 1, "s <= h-1 violated");
    const std::uint64_t s = to_u64(s_quot);
    const Nat after_s = n_h - s_quot * (G - 1) * gY;
    const Nat q_quot = after_s / Y;
    check_invariant(q_quot <= G * (G - 1) - 1, "q <= g(g-1)-1 violated");
    check_invariant(q_quot <= h() - 2, "q <= h-2 violated");
    const std::uint64_t q = to_u64(q_quot);
    step.s = s;
    step.q = q;

    const Nat rest = n - q_quot * Y - s_quot * (G - 1) * gY;
    check_invariant(rest >= h() && rest < Y + h(), "(3.11) violated");
    check_invariant(rest < n, "recursion amount not strictly decreasing");
    step.subtracted = n - rest;
    steps.push_back(std::move(step));

    auto parts = run(rest, depth + 1);

    // at most one part >= g^{mk+u}; it leads and receives nothing
    std::vector<std::size_t> big;
    for (std::size_t idx = 0; idx < parts.size(); ++idx)
        if (parts[idx].value >= Y) big.push_back(idx);
    check_invariant(big.size() <= 1, "two parts >= g^{mk+u}; contradicts (3.11)");
    if (!big.empty())
        std::rotate(parts.begin(), parts.begin() + big[0], parts.begin() + big[0] + 1);

    auto& trace_step = steps[step_idx];
    for (const auto& part : parts) trace_step.c.push_back(part.value);

    // +g^{mk+u} to parts 2..q+1, +(g-1)g^{mk+u+1} to parts 2..s+1; both index
    // ranges fit independently (q <= h-2, s <= h-1), which also covers q > s
    for (std::uint64_t j = 1; j <= q; ++j) parts[j].add_fresh(mk + u, 1, G);
    for (std::uint64_t j = 1; j <= s; ++j) parts[j].add_fresh(mk + u + 1, G - 1, G);
    return parts;
}

}  // namespace

Thm2Decomposer::Thm2Decomposer(const Thm2Params& params)
    : params_(params), partition_(thm2_partition(params)) {}

DecompositionCertificate Thm2Decomposer::decompose(const Nat& n) const {
    if (n < params_.h)
        throw OutOfRangeError("n = " + to_decimal(n) + " < h = " + std::to_string(params_.h) +
                              ": below the decomposable range");

    DecompositionCertificate cert;
    cert.n = n;
    cert.g = params_.g;
    cert.h = params_.h;
    cert.forbidden = std::nullopt;

    Rec rec{params_, partition_, cert.trace.steps};
    auto parts = rec.run(n, 0);
    cert.trace.case_label = cert.trace.steps.front().label;

    check_invariant(parts.size() == params_.h, "part count != h");
    Nat sum(0);
    for (const auto& part : parts) {
        check_invariant(part.value >= 1, "emitted empty part");
        for (const auto& [pos, digit] : part.digits) {
            check_invariant(digit >= 1 && digit <= params_.g - 1, "digit out of range");
            check_invariant(partition_.cell_at(pos) == 0,
                            "digit position " + std::to_string(pos) + " left cell 0");
        }
        sum += part.value;
        cert.parts.push_back(part.value);
        cert.part_cells.push_back(0);
    }
    check_invariant(sum == n, "parts sum to " + to_decimal(sum) + ", expected " + to_decimal(n));
    return cert;
}

DecompositionCertificate decompose_thm2(const Nat& n, const Thm2Params& p) {
    return Thm2Decomposer(p).decompose(n);
}

}  // namespace gbasis
