// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Desk scale throughout (n <= 2, L <= 5, m <= 3); every criterion
// finishes in seconds.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "dyw/generate.hpp"
#include "dyw/io.hpp"
#include "dyw/sparse.hpp"
#include "dyw/suite.hpp"
#include "dyw/verify.hpp"
#include "dyw/weights.hpp"
#include "oracle.hpp"

using namespace dyw;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& note = "") {
    std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                note.empty() ? "" : " -- ", note.c_str());
    if (!pass) ++g_failures;
}

bool close_rel(double a, double b, double tol) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= tol * scale;
}

WeightSystem linear_system(ScalarField v, ScalarField w, double p) {
    return WeightSystem(std::move(v), FieldVector(std::vector<ScalarField>{std::move(w)}),
                        ExponentVector({p}));
}

// ---- criterion 1: m = 1 collapse to the classical linear constants ----
void criterion_1() {
    const double tol = 1e-12;
    bool ok = true;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        Rng rng(mix_seed(101, static_cast<std::uint64_t>(t)));
        double p = t % 3 == 0 ? 1.5 : (t % 3 == 1 ? 2.0 : 4.0);
        ScalarField v = random_positive_field(rng, 1, 4);
        ScalarField w = random_positive_field(rng, 1, 4);
        WeightSystem ws = linear_system(v, w, p);

        double ap = ap_constant(ws).value;
        double ap_ref = oracle::classical_ap(ws.v(), ws.w()[0], p);
        double bp = bp_constant(ws).value;
        double bp_ref = oracle::classical_bp(ws.v(), ws.w()[0], p);
        double sp = sp_constant(ws).value;
        double sp_ref = oracle::classical_sp(ws.v(), ws.w()[0], p);
        double wi = winfty_constant(ws).value;
        double wi_ref = oracle::classical_fujii(ws.w()[0]);
        for (auto [a, b] : {std::pair{ap, ap_ref}, {bp, bp_ref}, {sp, sp_ref}, {wi, wi_ref}}) {
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
            if (!close_rel(a, b, tol)) ok = false;
        }
        if (rh_constant(ws).value != 1.0) ok = false;
    }
    char note[96];
    std::snprintf(note, sizeof(note), "100 weights, worst relative deviation %.3g", worst);
    report(1, "m=1 constants collapse to the linear formulas", ok, note);
}

// ---- criterion 2: brute-force oracle equivalence at L <= 3 ----
void criterion_2() {
    const double tol = 1e-9;
    bool ok = true;

    ScalarField step(1, 3, {1, 1, 1, 1, 4, 4, 4, 4});
    WeightSystem step_ws = linear_system(step, step, 2.0);
    if (!close_rel(ap_constant(step_ws).value, 25.0 / 16.0, tol)) ok = false;
    ScalarField spike(1, 2, {1, 0, 0, 0});
    if (!close_rel(fujii_ainfty(spike).value, 2.0, tol)) ok = false;

    for (int t = 0; t < 36; ++t) {
        Rng rng(mix_seed(202, static_cast<std::uint64_t>(t)));
        int L = 1 + t % 3;
        bool bilinear = t % 2 == 0;
        ExponentVector p = bilinear ? ExponentVector({4.0, 4.0}) : ExponentVector({2.0});
        WeightSystem ws = random_weight_system(rng, 1, L, p);
        if (!close_rel(ap_constant(ws).value, oracle::ap_brute(ws.v(), ws.dual_weights(), p), tol))
            ok = false;
        if (!close_rel(sp_constant(ws).value, oracle::sp_brute(ws.v(), ws.dual_weights(), p), tol))
            ok = false;
        if (!close_rel(winfty_constant(ws).value, oracle::winfty_brute(ws.w(), p), tol))
            ok = false;
    }
    report(2, "constants match the independent enumeration oracle", ok);
}

// ---- criteria 3 and 4: sparse family axioms and sparse domination ----
void criteria_3_4() {
    bool axioms = true, domination = true;
    for (int t = 0; t < 100; ++t) {
        Rng rng(mix_seed(303, static_cast<std::uint64_t>(t)));
        int m = 1 + t % 2;
        FieldVector fv = random_field_vector(rng, m, 1, 4, t % 2 == 0);
        GridSpec grid(1, 0, 4);
        double a = std::ldexp(1.0, m * 2);  // 2^{m(n+1)}
        SparseFamily fam = build_sparse_family(fv, grid, a);
        if (!validate_family(fam, fv).ok()) axioms = false;
        if (!sparse_domination_check(fv).pass) domination = false;
    }
    report(3, "sparse family axioms and selection sandwich", axioms, "100 instances, m in {1,2}");
    report(4, "sparse domination of the cross-grid maximal", domination);
}

// ---- criteria 5 and 6: explicit-constant theorem suites; testing identity ----
void criteria_5_6() {
    const std::vector<std::vector<double>> configs = {
        {2.0}, {4.0, 4.0}, {3.0, 6.0}, {6.0, 6.0, 6.0}};
    bool suites_ok = true, identity_ok = true, estimate_ok = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (size_t ci = 0; ci < configs.size(); ++ci) {
        ExponentVector p(configs[ci]);
        for (int s = 0; s < 50; ++s) {
            Rng rng(mix_seed(505, ci * 1000 + static_cast<std::uint64_t>(s)));
            WeightSystem ws = random_weight_system(rng, 1, 4, p);
            std::uint64_t trial_seed = mix_seed(606, ci * 1000 + static_cast<std::uint64_t>(s));

            CheckResult sawyer = sawyer_verify(ws, nullptr, 6, trial_seed);
            CheckResult bp = bp_verify(ws, nullptr, 6, trial_seed);
            CheckResult mixed = mixed_verify(ws, nullptr, 6, trial_seed);
            if (!sawyer.ok() || !bp.ok() || !mixed.ok()) suites_ok = false;
            for (const CheckResult* r : {&sawyer, &bp, &mixed})
                worst_margin = std::min(worst_margin, r->primary.margin);

            GridSpec grid(1, 0, 4);
            CarlesonSequence seq;
            seq.grid = grid;
            for (const DyadicCube& q : enumerate_cubes(grid, kLevelFloor, 4))
                if (rng.uniform() < 0.4) seq.entries.emplace_back(q, std::exp(rng.normal()));
            if (seq.entries.empty()) seq.entries.emplace_back(DyadicCube{1, 0, 0, {0, 0, 0}}, 1.0);
            FieldVector f = random_field_vector(rng, p.m(), 1, 4, s % 2 == 1);
            CheckResult carleson = carleson_embedding_check(seq, ws.dual_weights(), f, p);
            if (!carleson.ok()) suites_ok = false;
            worst_margin = std::min(worst_margin, carleson.primary.margin);

            for (const auto& d : sawyer.details)
                if (d.name == "sawyer/testing-identity" && d.left > 1e-9) identity_ok = false;

            if (s % 10 == 0) {
                CheckResult rel = relation_report(ws, 4, trial_seed);
                if (rel.primary.left > rel.primary.right * (1.0 + 1e-9)) estimate_ok = false;
            }
        }
    }
    char note[96];
    std::snprintf(note, sizeof(note), "4 exponent tuples x 50 systems, worst margin %.6g",
                  worst_margin);
    report(5, "explicit-constant theorem suites", suites_ok, note);
    report(6, "testing identity and norm-estimate ordering", identity_ok && estimate_ok);
}

// ---- criterion 7: linear sandwich ----
void criterion_7() {
    bool ok = true;
    for (int t = 0; t < 100; ++t) {
        Rng rng(mix_seed(707, static_cast<std::uint64_t>(t)));
        double p = t % 3 == 0 ? 1.5 : (t % 3 == 1 ? 2.0 : 4.0);
        ScalarField w = random_positive_field(rng, 1, 4);
        WeightSystem ws = linear_system(w, w, p);
        double ap = ap_constant(ws).value;
        double bp = bp_from(ws.v(), ws.dual_weights(), ws.exponents()).value;
        double hr = hruscev_ainfty(ws.dual_weights()[0]).value;
        if (ap > bp * (1 + 1e-9)) ok = false;
        if (bp > ap * hr * (1 + 1e-9)) ok = false;
    }
    report(7, "linear sandwich between joint and strong constants", ok,
           "100 weights, p in {3/2, 2, 4}");
}

// ---- criterion 8: six-sidelength covering ----
void criterion_8() {
    bool ok = true;
    for (int dim = 1; dim <= 2; ++dim) {
        const int L = 5;
        Rng rng(mix_seed(808, static_cast<std::uint64_t>(dim)));
        std::int64_t den = 3LL << (L + 1);
        for (int trial = 0; trial < 1000; ++trial) {
            std::int64_t lnum = rng.integer(2, den / 2);
            std::array<std::int64_t, kMaxDim> anum{0, 0, 0};
            for (int d = 0; d < dim; ++d) anum[static_cast<size_t>(d)] = rng.integer(0, den - lnum);
            bool found = false;
            for (unsigned mask = 0; mask < (1u << dim) && !found; ++mask) {
                GridSpec g(dim, mask, L);
                for (const auto& q : enumerate_cubes(g, kLevelFloor, L)) {
                    bool small_enough = q.level >= 0 ? den <= 6 * lnum * pow2i(q.level)
                                                     : den * pow2i(-q.level) <= 6 * lnum;
                    if (!small_enough) continue;
                    bool contains = true;
                    for (int d = 0; d < dim; ++d) {
                        std::int64_t lo = corner_ticks(q, d, L + 1);
                        std::int64_t hi = lo + side_ticks(q.level, L + 1);
                        if (anum[static_cast<size_t>(d)] < lo ||
                            anum[static_cast<size_t>(d)] + lnum > hi)
                            contains = false;
                    }
                    if (contains) {
                        found = true;
                        break;
                    }
                }
            }
            if (!found) ok = false;
        }
    }
    report(8, "translated grids cover with sidelength factor six", ok, "1000 cubes, n in {1,2}");
}

// ---- criterion 9: byte-identical verification runs ----
void criterion_9() {
#ifdef DYW_TOOL_PATH
    std::string tool = DYW_TOOL_PATH;
    std::string base = std::string(tool) + " verify --suite all --seed 7 --systems 2 --trials 6";
    int rc1 = std::system((base + " --out acceptance_run1.txt > /dev/null").c_str());
    int rc2 = std::system((base + " --out acceptance_run2.txt > /dev/null").c_str());
    bool ok = rc1 == 0 && rc2 == 0;
    std::string a, b;
    try {
        a = read_text_file("acceptance_run1.txt");
        b = read_text_file("acceptance_run2.txt");
    } catch (const std::exception&) {
        ok = false;
    }
    if (a.empty() || a != b) ok = false;
    report(9, "seeded verification runs are byte-identical", ok);
#else
    report(9, "seeded verification runs are byte-identical", false, "tool path not configured");
#endif
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criteria_3_4();
    criteria_5_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures;
}
