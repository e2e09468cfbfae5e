// Command-line front end: generate test weights, evaluate the weight
// constants, build and validate sparse families, run the verification suites.
#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyw/generate.hpp"
#include "dyw/io.hpp"
#include "dyw/sparse.hpp"
#include "dyw/suite.hpp"
#include "dyw/verify.hpp"
#include "dyw/weights.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;      // some verified inequality failed
constexpr int kExitInvalid = 2;   // invalid input or hypothesis violated

std::vector<double> parse_exponents(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<std::string> split_paths(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

int run_gen(const std::string& kind, int n, int level, double value, double ratio, double base,
            double spread, double lo, double hi, unsigned long long seed,
            const std::string& out_path) {
    dyw::ScalarField f = dyw::ScalarField::constant(n, level, 1.0);
    if (kind == "constant") {
        f = dyw::gen_constant(n, level, value);
    } else if (kind == "step") {
        f = dyw::gen_step(n, level, ratio);
    } else if (kind == "power") {
        f = dyw::gen_dyadic_power(n, level, base);
    } else if (kind == "lognormal") {
        dyw::Rng rng(seed);
        f = dyw::gen_lognormal(n, level, spread, rng);
    } else if (kind == "checkerboard") {
        f = dyw::gen_checkerboard(n, level, lo, hi);
    } else {
        std::cerr << "unknown kind: " << kind << "\n";
        return kExitInvalid;
    }
    dyw::save_field(f, out_path);
    std::cout << "wrote " << out_path << " (dimension " << n << ", level " << level << ", "
              << f.size() << " cells)\n";
    return kExitPass;
}

int run_constants(const std::string& v_path, const std::string& w_csv, const std::string& p_csv,
                  const std::string& backend_name, const std::string& out_path) {
    dyw::ScalarField v = dyw::load_field(v_path);
    std::vector<dyw::ScalarField> w;
    for (const auto& path : split_paths(w_csv)) w.push_back(dyw::load_field(path));
    dyw::ExponentVector p(parse_exponents(p_csv));
    dyw::WeightSystem ws(std::move(v), dyw::FieldVector(std::move(w)), p);
    dyw::Backend backend =
        backend_name == "cross" ? dyw::Backend::cross_grid : dyw::Backend::dyadic;

    std::string text;
    text += dyw::ap_constant(ws, backend).to_text() + "\n";
    text += dyw::winfty_constant(ws, backend).to_text() + "\n";
    text += dyw::bp_constant(ws, backend).to_text() + "\n";
    text += dyw::sp_constant(ws, backend).to_text() + "\n";
    text += dyw::rh_constant(ws, backend).to_text() + "\n";
    for (int i = 0; i < ws.m(); ++i) {
        dyw::ConstantReport fujii = dyw::fujii_ainfty(ws.dual_weights()[static_cast<size_t>(i)], backend);
        fujii.name = "fujii[sigma_" + std::to_string(i + 1) + "]";
        text += fujii.to_text() + "\n";
        dyw::ConstantReport hru = dyw::hruscev_ainfty(ws.dual_weights()[static_cast<size_t>(i)], backend);
        hru.name = "hruscev[sigma_" + std::to_string(i + 1) + "]";
        text += hru.to_text() + "\n";
    }
    std::cout << text;
    if (!out_path.empty()) dyw::write_text_file(out_path, text);
    return kExitPass;
}

int run_verify(const std::string& suite, int n, int level, const std::string& p_csv,
               unsigned long long seed, int trials, int systems, const std::string& v_path,
               const std::string& w_csv, const std::string& out_path) {
    dyw::SuiteConfig cfg;
    cfg.n = n;
    cfg.level = level;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.systems = systems;
    if (!p_csv.empty()) cfg.exponent_sets = {parse_exponents(p_csv)};
    for (const auto& ps : cfg.exponent_sets) {
        dyw::ExponentVector p(ps);  // validates 1 < p_i < inf
        if (!(p.lebesgue() > 1.0) && suite != "sparse" && suite != "relations") {
            std::cerr << "refused: the combined exponent p = " << p.lebesgue()
                      << " violates the p > 1 hypothesis of the embedding lemma\n";
            return kExitInvalid;
        }
    }
    dyw::SuiteOutcome outcome;
    if (!v_path.empty() || !w_csv.empty()) {
        if (v_path.empty() || w_csv.empty()) {
            std::cerr << "error: an explicit system needs both --v and --w\n";
            return kExitInvalid;
        }
        std::vector<dyw::ScalarField> w;
        for (const auto& path : split_paths(w_csv)) w.push_back(dyw::load_field(path));
        // default exponents for m explicit weights: p_i = 2m, so p = 2
        std::vector<double> ps = p_csv.empty()
                                     ? std::vector<double>(w.size(), 2.0 * static_cast<double>(w.size()))
                                     : cfg.exponent_sets.front();
        dyw::ExponentVector p(ps);
        dyw::WeightSystem ws(dyw::load_field(v_path), dyw::FieldVector(std::move(w)), p);
        outcome = dyw::run_suite_on_system(suite, ws, trials, seed);
    } else {
        outcome = dyw::run_suite(suite, cfg);
    }
    std::ostringstream header;
    header << "verify suite=" << suite << " n=" << n << " L=" << level << " seed=" << seed
           << " trials=" << trials << " systems=" << systems;
    std::string text = dyw::reports_to_text(outcome.reports, header.str());
    std::cout << text;
    int pass = 0, fail = 0, refused = 0;
    for (const auto& r : outcome.reports) {
        if (r.status == dyw::VerificationReport::Status::refused)
            ++refused;
        else if (r.status == dyw::VerificationReport::Status::ok)
            (r.pass ? pass : fail) += 1;
    }
    std::cout << "summary: " << pass << " passed, " << fail << " failed, " << refused
              << " refused\n";
    if (!out_path.empty()) dyw::write_text_file(out_path, text);
    if (outcome.any_refused) return kExitInvalid;
    return outcome.any_fail ? kExitFail : kExitPass;
}

int run_sparse(const std::string& f_csv, double a, unsigned alpha, const std::string& out_path) {
    std::vector<dyw::ScalarField> parts;
    for (const auto& path : split_paths(f_csv)) parts.push_back(dyw::load_field(path));
    dyw::FieldVector fv(std::move(parts));
    dyw::GridSpec grid(fv.dim(), alpha, fv.level());
    if (a <= 0.0) a = std::ldexp(1.0, fv.m() * (fv.dim() + 1));
    dyw::SparseFamily fam = dyw::build_sparse_family(fv, grid, a);
    dyw::FamilyValidation val = dyw::validate_family(fam, fv);
    std::string text = dyw::family_to_text(fam);
    text += std::string("axioms: ") + (val.ok() ? "valid" : "VIOLATED") + "\n";
    std::cout << text;
    if (!out_path.empty()) dyw::write_text_file(out_path, text);
    return val.ok() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic weight calculus: maximal functions, weight constants, sparse families"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a weight/field file");
    std::string gen_kind = "constant", gen_out;
    int gen_n = 1, gen_level = 4;
    double gen_value = 1.0, gen_ratio = 4.0, gen_base = 2.0, gen_spread = 0.8, gen_lo = 1.0,
           gen_hi = 2.0;
    unsigned long long gen_seed = 7;
    gen->add_option("--kind", gen_kind, "constant|step|power|lognormal|checkerboard");
    gen->add_option("--n", gen_n, "dimension");
    gen->add_option("--level", gen_level, "resolution L");
    gen->add_option("--value", gen_value, "constant value");
    gen->add_option("--ratio", gen_ratio, "step ratio");
    gen->add_option("--base", gen_base, "power base");
    gen->add_option("--spread", gen_spread, "lognormal spread");
    gen->add_option("--lo", gen_lo, "checkerboard low value");
    gen->add_option("--hi", gen_hi, "checkerboard high value");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--out", gen_out, "output file")->required();

    // constants
    auto* cons = app.add_subcommand("constants", "evaluate the weight constants of a system");
    std::string cons_v, cons_w, cons_p = "2", cons_backend = "dyadic", cons_out;
    cons->add_option("--v", cons_v, "v weight file")->required();
    cons->add_option("--w", cons_w, "comma list of weight files")->required();
    cons->add_option("--p", cons_p, "comma list of exponents");
    cons->add_option("--backend", cons_backend, "dyadic|cross");
    cons->add_option("--out", cons_out, "report file");

    // verify
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string ver_suite = "all", ver_p, ver_out, ver_v, ver_w;
    int ver_n = 1, ver_level = 4, ver_trials = 50, ver_systems = 8;
    unsigned long long ver_seed = 7;
    ver->add_option("--suite", ver_suite, "carleson|sawyer|bp|mixed|relations|sparse|all");
    ver->add_option("--n", ver_n, "dimension");
    ver->add_option("--level", ver_level, "resolution L");
    ver->add_option("--p", ver_p, "comma list of exponents (default: built-in matrix)");
    ver->add_option("--seed", ver_seed, "rng seed");
    ver->add_option("--trials", ver_trials, "random trial functions per system");
    ver->add_option("--systems", ver_systems, "weight systems per exponent tuple");
    ver->add_option("--v", ver_v, "explicit v weight file (with --w: verify this system)");
    ver->add_option("--w", ver_w, "explicit comma list of weight files");
    ver->add_option("--out", ver_out, "results file");

    // sparse
    auto* spc = app.add_subcommand("sparse", "build and validate a sparse family");
    std::string spc_f, spc_out;
    double spc_a = 0.0;
    unsigned spc_alpha = 0;
    spc->add_option("--f", spc_f, "comma list of field files")->required();
    spc->add_option("--a", spc_a, "threshold ratio a (> 1; default 2^{m(n+1)})");
    spc->add_option("--alpha", spc_alpha, "grid shift mask");
    spc->add_option("--out", spc_out, "family dump file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (gen->parsed())
            return run_gen(gen_kind, gen_n, gen_level, gen_value, gen_ratio, gen_base, gen_spread,
                           gen_lo, gen_hi, gen_seed, gen_out);
        if (cons->parsed()) return run_constants(cons_v, cons_w, cons_p, cons_backend, cons_out);
        if (ver->parsed())
            return run_verify(ver_suite, ver_n, ver_level, ver_p, ver_seed, ver_trials,
                              ver_systems, ver_v, ver_w, ver_out);
        if (spc->parsed()) return run_sparse(spc_f, spc_a, spc_alpha, spc_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
