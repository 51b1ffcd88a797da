// Command-line front end: construct partitions, decompose integers into
// certified sums, run the verification suites, and export CSV tables.
//
// Exit codes: 0 success; 1 mathematical out-of-range or failed verification;
// 2 invalid parameters; 3 internal invariant violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbasis/decompose.hpp"
#include "gbasis/errors.hpp"
#include "gbasis/gadic.hpp"
#include "gbasis/sumset.hpp"
#include "gbasis/verify_suites.hpp"

namespace {

using nlohmann::json;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << text << "\n";
    }
}

int finish_suite(const gbasis::SuiteResult& r, const std::string& out_path) {
    write_output(r.to_json().dump(2), out_path);
    std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    return r.pass ? 0 : 1;
}

struct Options {
    std::uint64_t g = 2;
    unsigned h = 2;
    std::uint64_t t = 2;
    std::uint64_t m = 7;
    std::uint64_t m1 = 65;
    std::uint64_t gap = 65;
    std::string n_decimal;
    std::uint64_t N = 1 << 20;
    unsigned samples = 1000;
    std::uint64_t seed = 42;
    std::uint64_t max_exp = 400;
    std::uint64_t B = 200;
    std::uint64_t c_max = 100;
    std::string out;
    std::string format = "json";
};

}  // namespace

namespace {

// --h is a real flag here, so help lives on --help alone.
CLI::App* sub(CLI::App* parent, const std::string& name, const std::string& desc) {
    auto* sc = parent->add_subcommand(name, desc);
    sc->set_help_flag("--help", "print help");
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"g-adic asymptotic basis toolkit"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    Options o;

    // construct ------------------------------------------------------------
    auto* construct = sub(&app, "construct", "build a partition and print its JSON");
    construct->require_subcommand(1);
    auto* c_res = sub(construct, "residue", "cells by residue mod h");
    c_res->add_option("--h", o.h)->required();
    auto* c_t1 = sub(construct, "thm1", "gapped-block partition");
    c_t1->add_option("--g", o.g)->required();
    c_t1->add_option("--h", o.h)->required();
    c_t1->add_option("--t", o.t)->required();
    c_t1->add_option("--m1", o.m1)->required();
    c_t1->add_option("--gap", o.gap)->required();
    auto* c_t2 = sub(construct, "thm2", "period-m partition");
    c_t2->add_option("--g", o.g)->required();
    c_t2->add_option("--h", o.h)->required();
    c_t2->add_option("--t", o.t)->required();
    c_t2->add_option("--m", o.m)->required();
    for (auto* sc : {c_res, c_t1, c_t2}) sc->add_option("--out", o.out);

    // decompose ------------------------------------------------------------
    auto* decompose = app.add_subcommand("decompose", "emit a certified h-part decomposition");
    decompose->require_subcommand(1);
    auto* d_t1 = sub(decompose, "thm1", "order-h sum avoiding g^2");
    d_t1->add_option("--n", o.n_decimal)->required();
    d_t1->add_option("--g", o.g)->required();
    d_t1->add_option("--h", o.h)->required();
    d_t1->add_option("--t", o.t)->required();
    d_t1->add_option("--m1", o.m1)->required();
    d_t1->add_option("--gap", o.gap)->required();
    auto* d_t2 = sub(decompose, "thm2", "order-h sum within cell 0");
    d_t2->add_option("--n", o.n_decimal)->required();
    d_t2->add_option("--g", o.g)->required();
    d_t2->add_option("--h", o.h)->required();
    d_t2->add_option("--t", o.t)->required();
    d_t2->add_option("--m", o.m)->required();
    for (auto* sc : {d_t1, d_t2}) sc->add_option("--out", o.out);

    // verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run a verification suite; exit 0 iff it passes");
    verify->require_subcommand(1);
    auto* v_t2 = sub(verify, "thm2", "exhaustive decomposition + oracle sweep");
    v_t2->add_option("--g", o.g);
    v_t2->add_option("--h", o.h);
    v_t2->add_option("--t", o.t);
    v_t2->add_option("--m", o.m);
    v_t2->add_option("--N", o.N)->required();
    auto* v_t1 = sub(verify, "thm1", "certified sampling per subcase label");
    v_t1->add_option("--g", o.g);
    v_t1->add_option("--h", o.h);
    v_t1->add_option("--t", o.t);
    v_t1->add_option("--m1", o.m1);
    v_t1->add_option("--gap", o.gap);
    v_t1->add_option("--samples", o.samples);
    v_t1->add_option("--seed", o.seed);
    v_t1->add_option("--max-exp", o.max_exp);
    auto* v_1a = sub(verify, "lemma1a", "digit-set disjointness");
    v_1a->add_option("--g", o.g);
    v_1a->add_option("--h", o.h)->default_val(3u);
    v_1a->add_option("--N", o.N)->required();
    auto* v_1c = sub(verify, "lemma1c", "asymptotic basis tail coverage");
    v_1c->add_option("--g", o.g);
    v_1c->add_option("--h", o.h);
    v_1c->add_option("--N", o.N)->required();
    v_1c->add_option("--c-max", o.c_max);
    auto* v_gad = sub(verify, "gadic", "digit layer property sweep");
    auto* v_flt = sub(verify, "faults", "mutated certificates must be rejected");
    v_flt->add_option("--samples", o.samples)->default_val(100u);
    v_flt->add_option("--seed", o.seed);
    auto* v_thd = sub(verify, "thmd", "minimality probe (evidence only)");
    v_thd->add_option("--g", o.g)->default_val(std::uint64_t(3));
    v_thd->add_option("--h", o.h)->default_val(4u);
    v_thd->add_option("--t", o.t)->default_val(std::uint64_t(2));
    v_thd->add_option("--N", o.N)->required();
    v_thd->add_option("--B", o.B);
    for (auto* sc : {v_t2, v_t1, v_1a, v_1c, v_gad, v_flt, v_thd}) sc->add_option("--out", o.out);

    // report ---------------------------------------------------------------
    auto* report = app.add_subcommand("report", "CSV tables for notebooks");
    report->require_subcommand(1);
    auto* r_rh = sub(report, "rh", "representation counts for the residue-cell union");
    r_rh->add_option("--g", o.g);
    r_rh->add_option("--h", o.h);
    r_rh->add_option("--N", o.N)->required();
    auto* r_gr = sub(report, "growth", "counting function of the even-position digit set");
    r_gr->add_option("--g", o.g);
    r_gr->add_option("--N", o.N);
    auto* r_mn = sub(report, "minimality", "removability probe table");
    r_mn->add_option("--g", o.g)->default_val(std::uint64_t(3));
    r_mn->add_option("--h", o.h)->default_val(4u);
    r_mn->add_option("--t", o.t)->default_val(std::uint64_t(2));
    r_mn->add_option("--N", o.N)->required();
    r_mn->add_option("--B", o.B);
    for (auto* sc : {r_rh, r_gr, r_mn}) {
        sc->add_option("--out", o.out);
        sc->add_option("--format", o.format);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    using namespace gbasis;
    try {
        if (construct->parsed()) {
            PartitionSpec spec =
                c_res->parsed()  ? residue_partition(o.h)
                : c_t1->parsed() ? thm1_partition(Thm1Params{o.g, o.h, o.t, o.m1, o.gap})
                                 : thm2_partition(Thm2Params{o.g, o.h, o.t, o.m});
            write_output(spec.to_json().dump(2), o.out);
            return 0;
        }

        if (decompose->parsed()) {
            const Nat n = nat_from_decimal(o.n_decimal);
            const DecompositionCertificate cert =
                d_t1->parsed() ? decompose_thm1(n, Thm1Params{o.g, o.h, o.t, o.m1, o.gap})
                               : decompose_thm2(n, Thm2Params{o.g, o.h, o.t, o.m});
            write_output(cert.to_json().dump(2), o.out);
            return 0;
        }

        if (verify->parsed()) {
            SuiteResult r;
            if (v_t2->parsed())
                r = check_thm2_exhaustive(Thm2Params{o.g, o.h, o.t, o.m}, o.N);
            else if (v_t1->parsed())
                r = check_thm1_sampling(Thm1Params{o.g, o.h, o.t, o.m1, o.gap}, o.samples,
                                        o.seed, o.max_exp);
            else if (v_1a->parsed())
                r = check_lemma1a(o.h, o.g, o.N);
            else if (v_1c->parsed())
                r = check_lemma1c(o.h, o.g, o.N, o.c_max);
            else if (v_gad->parsed())
                r = check_gadic_properties();
            else if (v_flt->parsed())
                r = check_fault_injection(o.samples, o.seed);
            else
                r = check_thmd_probe(o.g, o.h, o.t, o.N, o.B);
            return finish_suite(r, o.out);
        }

        // report
        std::ostringstream csv;
        if (r_rh->parsed()) {
            const auto spec = residue_partition(o.h);
            std::vector<std::uint64_t> members;
            for (unsigned c = 0; c < o.h; ++c) {
                auto part = enumerate_members(spec.cell_set(c), o.g, o.N);
                members.insert(members.end(), part.begin(), part.end());
            }
            const auto table = rep_table(from_members(members, o.N), o.h, o.N);
            csv << "n,r_h\n";
            for (std::uint64_t n = 0; n <= o.N; ++n) csv << n << "," << table[n] << "\n";
        } else if (r_gr->parsed()) {
            const PositionSet evens = [](std::uint64_t p) { return p % 2 == 0; };
            csv << "x,count\n";
            for (std::uint64_t x = 2; x <= o.N; x *= 2)
                csv << x << "," << count_members(evens, o.g, x) << "\n";
        } else {
            const auto spec = cyclic_block_partition(o.h, o.t);
            std::vector<std::uint64_t> members;
            for (unsigned c = 0; c < o.h; ++c) {
                auto part = enumerate_members(spec.cell_set(c), o.g, o.N);
                members.insert(members.end(), part.begin(), part.end());
            }
            const auto rep = minimality_probe(from_members(members, o.N), o.h, o.N, o.B);
            csv << "a,e_a_nonempty,e_a_count,e_a_max\n";
            for (const auto& probe : rep.probes) {
                csv << probe.a << "," << (probe.e_a_nonempty ? 1 : 0) << ","
                    << probe.e_a_count << ",";
                if (probe.e_a_max) csv << *probe.e_a_max;
                csv << "\n";
            }
        }
        std::string text = csv.str();
        text.pop_back();  // trailing newline re-added by write_output
        write_output(text, o.out);
        return 0;
    } catch (const gbasis::ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const gbasis::OutOfRangeError& e) {
        std::cerr << "out of range: " << e.what() << "\n";
        return 1;
    } catch (const gbasis::InvariantViolation& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
