#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyw/generate.hpp"
#include "dyw/report.hpp"
#include "dyw/sparse.hpp"
#include "dyw/verify.hpp"

namespace dyw {

/// Desk-scale defaults: every suite finishes in seconds.
struct SuiteConfig {
    int n = 1;
    int level = 4;
    int systems = 8;        // weight systems per exponent tuple
    int trials = 50;        // random trial functions per system
    std::uint64_t seed = 7;
    std::vector<std::vector<double>> exponent_sets = {{2.0}, {4.0, 4.0}, {3.0, 6.0}, {6.0, 6.0, 6.0}};
};

struct SuiteOutcome {
    std::vector<VerificationReport> reports;
    bool any_fail = false;
    bool any_refused = false;

    void absorb(const CheckResult& r) {
        for (const auto& rep : r.all()) {
            if (rep.status == VerificationReport::Status::refused) any_refused = true;
            if (rep.status == VerificationReport::Status::ok && !rep.pass) any_fail = true;
            reports.push_back(rep);
        }
    }
    void absorb(const VerificationReport& rep) {
        if (rep.status == VerificationReport::Status::refused) any_refused = true;
        if (rep.status == VerificationReport::Status::ok && !rep.pass) any_fail = true;
        reports.push_back(rep);
    }
};

namespace detail {

inline std::string suite_digest(const SuiteConfig& cfg, const ExponentVector& p, int system) {
    return "n=" + std::to_string(cfg.n) + ";L=" + std::to_string(cfg.level) + ";p=" + p.to_string() +
           ";seed=" + std::to_string(cfg.seed) + ";sys=" + std::to_string(system);
}

inline CarlesonSequence random_sequence(Rng& rng, const GridSpec& grid) {
    CarlesonSequence seq;
    seq.grid = grid;
    for (const DyadicCube& q : enumerate_cubes(grid, kLevelFloor, grid.resolution))
        if (rng.uniform() < 0.4) seq.entries.emplace_back(q, std::exp(rng.normal()));
    if (seq.entries.empty()) {
        std::array<std::int64_t, kMaxDim> half{1, 1, 1};
        seq.entries.emplace_back(containing_cube(grid, half, 2, 0), 1.0);
    }
    return seq;
}

}  // namespace detail

inline SuiteOutcome run_suite(const std::string& suite, const SuiteConfig& cfg) {
    SuiteOutcome out;
    bool all = suite == "all";
    bool any = false;

    auto theorem_pass = [&](const std::string& name) {
        for (size_t ei = 0; ei < cfg.exponent_sets.size(); ++ei) {
            ExponentVector p(cfg.exponent_sets[ei]);
            for (int s = 0; s < cfg.systems; ++s) {
                Rng rng(mix_seed(cfg.seed, ei * 1000 + static_cast<std::uint64_t>(s)));
                std::string digest = detail::suite_digest(cfg, p, s);
                std::uint64_t trial_seed = mix_seed(cfg.seed, 900 + ei * 1000 + static_cast<std::uint64_t>(s));
                if (name == "carleson") {
                    WeightSystem ws = random_weight_system(rng, cfg.n, cfg.level, p);
                    GridSpec grid(cfg.n, 0, cfg.level);
                    CarlesonSequence seq = detail::random_sequence(rng, grid);
                    FieldVector f = random_field_vector(rng, p.m(), cfg.n, cfg.level, s % 2 == 1);
                    out.absorb(carleson_embedding_check(seq, ws.dual_weights(), f, p, digest));
                } else if (name == "sawyer") {
                    WeightSystem ws = random_weight_system(rng, cfg.n, cfg.level, p);
                    out.absorb(sawyer_verify(ws, nullptr, cfg.trials, trial_seed, digest));
                } else if (name == "bp") {
                    WeightSystem ws = random_weight_system(rng, cfg.n, cfg.level, p);
                    out.absorb(bp_verify(ws, nullptr, cfg.trials, trial_seed, digest));
                } else if (name == "mixed") {
                    WeightSystem ws = random_weight_system(rng, cfg.n, cfg.level, p);
                    out.absorb(mixed_verify(ws, nullptr, cfg.trials, trial_seed, digest));
                } else if (name == "relations") {
                    WeightSystem ws = random_canonical_weight_system(rng, cfg.n, cfg.level, p);
                    out.absorb(relation_report(ws, cfg.trials, trial_seed, digest));
                }
            }
        }
    };

    if (all || suite == "carleson") { theorem_pass("carleson"); any = true; }
    if (all || suite == "sawyer") { theorem_pass("sawyer"); any = true; }
    if (all || suite == "bp") { theorem_pass("bp"); any = true; }
    if (all || suite == "mixed") { theorem_pass("mixed"); any = true; }
    if (all || suite == "relations") { theorem_pass("relations"); any = true; }
    if (all || suite == "sparse") {
        any = true;
        for (int m = 1; m <= 2; ++m) {
            for (int s = 0; s < cfg.systems; ++s) {
                Rng rng(mix_seed(cfg.seed, 7000 + static_cast<std::uint64_t>(m) * 100 +
                                               static_cast<std::uint64_t>(s)));
                FieldVector fv = random_field_vector(rng, m, cfg.n, cfg.level, s % 2 == 1);
                std::string digest = "m=" + std::to_string(m) + ";n=" + std::to_string(cfg.n) +
                                     ";L=" + std::to_string(cfg.level) +
                                     ";seed=" + std::to_string(cfg.seed) + ";sys=" + std::to_string(s);
                GridSpec grid(cfg.n, 0, cfg.level);
                double a = std::ldexp(1.0, m * (cfg.n + 1));
                SparseFamily fam = build_sparse_family(fv, grid, a);
                FamilyValidation val = validate_family(fam, fv);
                out.absorb(make_report("sparse/axioms", val.ok() ? 0.0 : 1.0, 0.0, 1.0, digest));
                out.absorb(sparse_domination_check(fv, digest));
            }
        }
    }
    if (!any) throw std::invalid_argument("unknown suite: " + suite);
    return out;
}

/// Run the requested checks on one explicitly supplied weight system.
inline SuiteOutcome run_suite_on_system(const std::string& suite, const WeightSystem& ws,
                                        int trials, std::uint64_t seed) {
    SuiteOutcome out;
    bool all = suite == "all";
    bool any = false;
    std::string digest = "explicit;p=" + ws.exponents().to_string() + ";seed=" + std::to_string(seed);
    if (all || suite == "carleson") {
        any = true;
        Rng rng(mix_seed(seed, 1));
        GridSpec grid(ws.dim(), 0, ws.level());
        CarlesonSequence seq = detail::random_sequence(rng, grid);
        FieldVector f = random_field_vector(rng, ws.m(), ws.dim(), ws.level(), false);
        out.absorb(carleson_embedding_check(seq, ws.dual_weights(), f, ws.exponents(), digest));
    }
    if (all || suite == "sawyer") {
        any = true;
        out.absorb(sawyer_verify(ws, nullptr, trials, mix_seed(seed, 2), digest));
    }
    if (all || suite == "bp") {
        any = true;
        out.absorb(bp_verify(ws, nullptr, trials, mix_seed(seed, 3), digest));
    }
    if (all || suite == "mixed") {
        any = true;
        out.absorb(mixed_verify(ws, nullptr, trials, mix_seed(seed, 4), digest));
    }
    if (all || suite == "relations") {
        any = true;
        out.absorb(relation_report(ws, trials, mix_seed(seed, 5), digest));
    }
    if (all || suite == "sparse") {
        any = true;
        out.absorb(sparse_domination_check(ws.dual_weights(), digest));
        double a = std::ldexp(1.0, ws.m() * (ws.dim() + 1));
        SparseFamily fam = build_sparse_family(ws.dual_weights(), GridSpec(ws.dim(), 0, ws.level()), a);
        FamilyValidation val = validate_family(fam, ws.dual_weights());
        out.absorb(make_report("sparse/axioms", val.ok() ? 0.0 : 1.0, 0.0, 1.0, digest));
    }
    if (!any) throw std::invalid_argument("unknown suite: " + suite);
    return out;
}

inline std::string reports_to_text(const std::vector<VerificationReport>& reports,
                                   const std::string& header) {
    std::string s = "# " + header + "\n";
    for (const auto& r : reports) s += r.to_text() + "\n";
    return s;
}

}  // namespace dyw
