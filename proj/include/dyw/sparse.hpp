#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyw/field.hpp"
#include "dyw/grid.hpp"
#include "dyw/integrate.hpp"
#include "dyw/maximal.hpp"
#include "dyw/report.hpp"

namespace dyw {

/// One level set of the stopping-time construction: the maximal cubes whose
/// product-average exceeds a^k, the cell set Omega_k = {maximal function >
/// a^k}, and per cube the disjoint remainder E = cells(Q) \ Omega_{k+1}.
struct SparseShell {
    int k = 0;
    double threshold = 0.0;
    std::vector<DyadicCube> cubes;
    std::vector<double> products;                       // product-average per cube
    std::vector<std::vector<std::uint32_t>> e_cells;    // per cube, sorted cell indices
    std::vector<std::uint32_t> omega_cells;             // sorted cell indices
};

struct SparseFamily {
    GridSpec grid;
    double base = 2.0;  // the ratio a between consecutive thresholds
    std::vector<SparseShell> shells;

    bool empty() const { return shells.empty(); }
    size_t cube_count() const {
        size_t n = 0;
        for (const auto& s : shells) n += s.cubes.size();
        return n;
    }
};

namespace detail {

/// Largest k with base^k < t (t > 0, base > 1).
inline int largest_level_below(double base, double t) {
    int k = static_cast<int>(std::floor(std::log(t) / std::log(base)));
    while (std::pow(base, k) >= t) --k;
    while (std::pow(base, k + 1) < t) ++k;
    return k;
}

inline std::vector<std::uint32_t> cells_above(const ScalarField& phi, double t) {
    std::vector<std::uint32_t> out;
    for (size_t i = 0; i < phi.size(); ++i)
        if (phi[i] > t) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

inline std::vector<std::uint32_t> cell_set_of_cube(const ScalarField& shape, const DyadicCube& q) {
    std::vector<std::uint32_t> out;
    for_each_cell_in_box(shape, cells_under(q, shape.level()),
                         [&](size_t idx) { out.push_back(static_cast<std::uint32_t>(idx)); });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Stopping-time family for the thresholds a^k: top-down from the single
/// level -2 cube covering the root, a cube is selected when its product of
/// averages exceeds a^k and no ancestor was selected. Shells run over the k
/// with a^k below the maximum of the maximal function; below the minimum
/// positive value the level sets stop changing.
inline SparseFamily build_sparse_family(const FieldVector& fv, const GridSpec& grid, double a) {
    require_grid_matches(grid, fv.dim(), fv.level());
    if (!(a > 1.0)) throw std::invalid_argument("sparse family: base must exceed 1");
    SparseFamily fam;
    fam.grid = grid;
    fam.base = a;

    ScalarField phi = dyadic_maximal(fv, grid);
    double phi_max = phi.max_cell();
    if (phi_max <= 0.0) return fam;  // identically zero input: empty family
    double phi_min_pos = phi_max;
    for (size_t i = 0; i < phi.size(); ++i)
        if (phi[i] > 0.0) phi_min_pos = std::min(phi_min_pos, phi[i]);

    int k_lo = detail::largest_level_below(a, phi_min_pos);
    int k_hi = detail::largest_level_below(a, phi_max);

    std::vector<const ScalarField*> ptrs;
    for (const auto& f : fv.parts) ptrs.push_back(&f);
    CubeIntegralTable table(grid, ptrs);
    auto product_average = [&](const DyadicCube& q) {
        double inv_vol = std::ldexp(1.0, q.level * q.dim);
        double prod = 1.0;
        for (int i = 0; i < fv.m(); ++i)
            prod *= table.value(q.level, q.pos, static_cast<size_t>(i)) * inv_vol;
        return prod;
    };

    std::array<std::int64_t, kMaxDim> half{0, 0, 0};
    for (int d = 0; d < grid.dim; ++d) half[static_cast<size_t>(d)] = 1;
    DyadicCube top = containing_cube(grid, half, 2, kLevelFloor);

    for (int k = k_lo; k <= k_hi; ++k) {
        SparseShell shell;
        shell.k = k;
        shell.threshold = std::pow(a, k);
        // Depth-first selection; children visited in position order.
        std::vector<DyadicCube> stack{top};
        while (!stack.empty()) {
            DyadicCube q = stack.back();
            stack.pop_back();
            if (!table.in_range(q.level, q.pos)) continue;  // no overlap with the root cube
            double prod = product_average(q);
            if (prod > shell.threshold) {
                shell.cubes.push_back(q);
                shell.products.push_back(prod);
                continue;
            }
            if (prod <= 0.0 || q.level >= grid.resolution) continue;
            int count = 0;
            auto kids = children_of(q, &count);
            for (int c = count - 1; c >= 0; --c) stack.push_back(kids[static_cast<size_t>(c)]);
        }
        shell.omega_cells = detail::cells_above(phi, shell.threshold);
        if (!shell.omega_cells.empty()) fam.shells.push_back(std::move(shell));
    }

    // Remainder sets against the next nonempty level set.
    ScalarField shape = ScalarField::constant(fv.dim(), fv.level(), 0.0);
    for (size_t s = 0; s < fam.shells.size(); ++s) {
        const std::vector<std::uint32_t>* next =
            (s + 1 < fam.shells.size()) ? &fam.shells[s + 1].omega_cells : nullptr;
        for (const DyadicCube& q : fam.shells[s].cubes) {
            auto cells = detail::cell_set_of_cube(shape, q);
            if (next) {
                std::vector<std::uint32_t> rem;
                std::set_difference(cells.begin(), cells.end(), next->begin(), next->end(),
                                    std::back_inserter(rem));
                fam.shells[s].e_cells.push_back(std::move(rem));
            } else {
                fam.shells[s].e_cells.push_back(std::move(cells));
            }
        }
    }
    return fam;
}

/// Axioms of a sparse family, re-validated after construction. Set-theoretic
/// checks are exact (integer cell arithmetic, integer cube volumes in units
/// of 2^{-nL}); the selection sandwich compares floating averages with a tiny
/// relative slack.
struct FamilyValidation {
    bool disjoint = true;       // cubes of one shell are pairwise disjoint
    bool nested = true;         // Omega_{k+1} subset of Omega_k
    bool half_packing = true;   // |Omega~_{k+1} ∩ Q| <= |Q|/2, geometric
    bool comparable = true;     // |Q| <= 2|E|, geometric, and E sets disjoint
    bool covered = true;        // Omega_k == union of selected cube cells
    bool sandwich = true;       // a^k < prod avg <= 2^{mn} a^k
    std::string detail;

    bool ok() const {
        return disjoint && nested && half_packing && comparable && covered && sandwich;
    }
};

inline FamilyValidation validate_family(const SparseFamily& fam, const FieldVector& fv) {
    FamilyValidation out;
    if (fam.empty()) return out;
    const int L = fam.grid.resolution;
    const int n = fam.grid.dim;
    ScalarField shape = ScalarField::constant(n, L, 0.0);
    auto vol_units = [&](int level) { return pow2i(n * (L - level)); };  // in cells

    double upper_factor = std::ldexp(1.0, fv.m() * n);  // 2^{mn}
    for (size_t s = 0; s < fam.shells.size(); ++s) {
        const SparseShell& sh = fam.shells[s];
        for (size_t i = 0; i < sh.cubes.size(); ++i) {
            for (size_t j = i + 1; j < sh.cubes.size(); ++j)
                if (!cubes_disjoint(sh.cubes[i], sh.cubes[j])) out.disjoint = false;
            // Selection bounds: the recomputed product of averages must land
            // in (a^k, 2^{mn} a^k].
            double prod = 1.0;
            for (int f = 0; f < fv.m(); ++f)
                prod *= cube_average(fv[static_cast<size_t>(f)], sh.cubes[i]);
            if (!(prod > sh.threshold)) out.sandwich = false;
            if (prod > upper_factor * sh.threshold * (1.0 + 1e-12)) out.sandwich = false;
        }
        if (s + 1 < fam.shells.size()) {
            const SparseShell& nx = fam.shells[s + 1];
            if (!std::includes(sh.omega_cells.begin(), sh.omega_cells.end(),
                               nx.omega_cells.begin(), nx.omega_cells.end()))
                out.nested = false;
            for (const DyadicCube& q : sh.cubes) {
                std::int64_t inner = 0;
                for (const DyadicCube& r : nx.cubes)
                    if (cube_contains(q, r)) inner += vol_units(r.level);
                if (2 * inner > vol_units(q.level)) out.half_packing = false;
            }
        }
        // Cover: Omega_k equals the union of the selected cubes' cell sets.
        std::vector<std::uint32_t> cover;
        for (const DyadicCube& q : sh.cubes) {
            auto cs = detail::cell_set_of_cube(shape, q);
            cover.insert(cover.end(), cs.begin(), cs.end());
        }
        std::sort(cover.begin(), cover.end());
        if (cover != sh.omega_cells) out.covered = false;
    }
    // E sets pairwise disjoint across the whole family, and the geometric
    // comparability |Q| <= 2|E| (equivalent to the half-packing bound).
    std::vector<std::uint32_t> all_e;
    for (size_t s = 0; s < fam.shells.size(); ++s) {
        const SparseShell& sh = fam.shells[s];
        for (size_t i = 0; i < sh.cubes.size(); ++i) {
            std::int64_t inner = 0;
            if (s + 1 < fam.shells.size())
                for (const DyadicCube& r : fam.shells[s + 1].cubes)
                    if (cube_contains(sh.cubes[i], r)) inner += vol_units(r.level);
            std::int64_t q_units = vol_units(sh.cubes[i].level);
            if (q_units > 2 * (q_units - inner)) out.comparable = false;
            all_e.insert(all_e.end(), sh.e_cells[i].begin(), sh.e_cells[i].end());
        }
    }
    std::sort(all_e.begin(), all_e.end());
    if (std::adjacent_find(all_e.begin(), all_e.end()) != all_e.end()) out.comparable = false;
    if (!out.ok()) out.detail = "sparse family axiom violated";
    return out;
}

/// Sparse operator: sum over family cubes containing the cell of the product
/// of averages of the arguments.
inline ScalarField sparse_operator(const FieldVector& fv, const SparseFamily& fam) {
    if (fam.grid.dim != fv.dim() || fam.grid.resolution != fv.level())
        throw std::invalid_argument("sparse operator: grid mismatch");
    std::vector<double> out(fv[0].size(), 0.0);
    ScalarField shape = ScalarField::constant(fv.dim(), fv.level(), 0.0);
    for (const SparseShell& sh : fam.shells) {
        for (const DyadicCube& q : sh.cubes) {
            double prod = 1.0;
            for (int i = 0; i < fv.m(); ++i)
                prod *= cube_average(fv[static_cast<size_t>(i)], q);
            for_each_cell_in_box(shape, cells_under(q, fv.level()),
                                 [&](size_t idx) { out[idx] += prod; });
        }
    }
    return ScalarField(fv.dim(), fv.level(), std::move(out));
}

/// Pointwise domination of the cross-grid maximal function by the sum of the
/// per-grid sparse operators, with the constant (2*12^n)^m. One family per
/// translated grid, each built from that grid's own maximal function with the
/// default base 2^{m(n+1)}. The cross-grid proxy sits below the full
/// supremum-over-all-cubes operator, so a pass here is implied a fortiori for
/// the proxy; the report records the observed ratio.
inline VerificationReport sparse_domination_check(const FieldVector& fv,
                                                  const std::string& digest = "") {
    int n = fv.dim();
    int m = fv.m();
    double a = std::ldexp(1.0, m * (n + 1));
    ScalarField rhs = ScalarField::constant(n, fv.level(), 0.0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        GridSpec g(n, mask, fv.level());
        SparseFamily fam = build_sparse_family(fv, g, a);
        rhs = ScalarField::combine(rhs, sparse_operator(fv, fam),
                                   [](double x, double y) { return x + y; });
    }
    ScalarField lhs = cross_grid_maximal(fv);
    double worst_ratio = 0.0;
    for (size_t c = 0; c < lhs.size(); ++c) {
        if (lhs[c] <= 0.0) continue;
        double r = rhs[c] > 0.0 ? lhs[c] / rhs[c] : std::numeric_limits<double>::infinity();
        worst_ratio = std::max(worst_ratio, r);
    }
    double constant = std::pow(2.0 * std::pow(12.0, n), m);
    return make_report("sparse/domination", worst_ratio, constant, constant,
                       digest + (digest.empty() ? "" : ";") + "lhs=cross-grid-proxy");
}

inline std::string family_to_text(const SparseFamily& fam) {
    std::string s = "sparse-family alpha=" + std::to_string(fam.grid.shift_mask) +
                    " dim=" + std::to_string(fam.grid.dim) +
                    " level=" + std::to_string(fam.grid.resolution);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", fam.base);
    s += " a=";
    s += buf;
    s += "\n";
    for (const SparseShell& sh : fam.shells) {
        for (size_t i = 0; i < sh.cubes.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", sh.products[i]);
            s += "k=" + std::to_string(sh.k) + " " + cube_to_string(sh.cubes[i]) + " avg=" + buf +
                 " e_cells=" + std::to_string(sh.e_cells.empty() ? 0 : sh.e_cells[i].size()) + "\n";
        }
    }
    return s;
}

}  // namespace dyw
