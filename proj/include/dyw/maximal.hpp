#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dyw/field.hpp"
#include "dyw/grid.hpp"
#include "dyw/integrate.hpp"

namespace dyw {

enum class Backend { dyadic, cross_grid };

inline const char* backend_name(Backend b) {
    return b == Backend::dyadic ? "dyadic" : "cross-grid";
}

inline void require_grid_matches(const GridSpec& g, int dim, int level) {
    if (g.dim != dim || g.resolution != level)
        throw std::invalid_argument("grid does not match field shape");
}

/// Integrals of a set of fields over every enumerated cube of one grid
/// (levels -2..L), stored dense per level for O(1) lookup by position.
class CubeIntegralTable {
  public:
    CubeIntegralTable(const GridSpec& grid, const std::vector<const ScalarField*>& fields)
        : grid_(grid), nfields_(fields.size()) {
        require_grid_matches(grid, fields.front()->dim(), fields.front()->level());
        levels_.resize(static_cast<size_t>(grid.resolution - kLevelFloor + 1));
        for (int k = kLevelFloor; k <= grid.resolution; ++k) {
            Level& lv = levels_[static_cast<size_t>(k - kLevelFloor)];
            std::int64_t count = 1;
            for (int d = 0; d < grid.dim; ++d) {
                std::int64_t hi = 0;
                root_index_range(k, shift_offset(grid.shift_mask, k, d),
                                 &lv.j_min[static_cast<size_t>(d)], &hi);
                lv.extent[static_cast<size_t>(d)] = hi - lv.j_min[static_cast<size_t>(d)] + 1;
                count *= lv.extent[static_cast<size_t>(d)];
            }
            lv.vals.assign(static_cast<size_t>(count) * nfields_, 0.0);
            DyadicCube q;
            q.dim = grid.dim;
            q.shift_mask = grid.shift_mask;
            q.level = k;
            std::array<std::int64_t, kMaxDim> j = lv.j_min;
            for (std::int64_t ord = 0; ord < count; ++ord) {
                q.pos = j;
                for (size_t f = 0; f < nfields_; ++f)
                    lv.vals[static_cast<size_t>(ord) * nfields_ + f] =
                        integral_over_cube(*fields[f], q);
                int d = grid.dim - 1;
                while (d >= 0) {
                    if (++j[static_cast<size_t>(d)] <
                        lv.j_min[static_cast<size_t>(d)] + lv.extent[static_cast<size_t>(d)])
                        break;
                    j[static_cast<size_t>(d)] = lv.j_min[static_cast<size_t>(d)];
                    --d;
                }
            }
        }
    }

    const GridSpec& grid() const { return grid_; }

    bool in_range(int level, const std::array<std::int64_t, kMaxDim>& j) const {
        const Level& lv = levels_[static_cast<size_t>(level - kLevelFloor)];
        for (int d = 0; d < grid_.dim; ++d) {
            std::int64_t r = j[static_cast<size_t>(d)] - lv.j_min[static_cast<size_t>(d)];
            if (r < 0 || r >= lv.extent[static_cast<size_t>(d)]) return false;
        }
        return true;
    }

    double value(int level, const std::array<std::int64_t, kMaxDim>& j, size_t field) const {
        const Level& lv = levels_[static_cast<size_t>(level - kLevelFloor)];
        std::int64_t ord = 0;
        for (int d = 0; d < grid_.dim; ++d)
            ord = ord * lv.extent[static_cast<size_t>(d)] +
                  (j[static_cast<size_t>(d)] - lv.j_min[static_cast<size_t>(d)]);
        return lv.vals[static_cast<size_t>(ord) * nfields_ + field];
    }

  private:
    struct Level {
        std::array<std::int64_t, kMaxDim> j_min{0, 0, 0};
        std::array<std::int64_t, kMaxDim> extent{1, 1, 1};
        std::vector<double> vals;
    };
    GridSpec grid_;
    size_t nfields_;
    std::vector<Level> levels_;
};

namespace detail {

template <typename CompetitorFn>
inline ScalarField cell_center_max(int dim, int level, const GridSpec& grid, CompetitorFn&& value_at) {
    std::vector<double> out(static_cast<size_t>(ScalarField::cell_count(dim, level)), 0.0);
    ScalarField shape = ScalarField::constant(dim, level, 0.0);
    std::int64_t den = pow2i(level + 1);
    for (size_t idx = 0; idx < out.size(); ++idx) {
        auto c = shape.coords_of(idx);
        std::array<std::int64_t, kMaxDim> num{0, 0, 0};
        for (int d = 0; d < dim; ++d) num[static_cast<size_t>(d)] = 2 * c[static_cast<size_t>(d)] + 1;
        double best = 0.0;
        for (int k = kLevelFloor; k <= level; ++k) {
            DyadicCube q = containing_cube(grid, num, den, k);
            double v = value_at(q);
            if (v > best) best = v;
        }
        out[idx] = best;
    }
    return ScalarField(dim, level, std::move(out));
}

}  // namespace detail

/// Multisublinear maximal function over one grid: at each level-L cell center,
/// the max over containing cubes (levels -2..L) of the product of averages.
inline ScalarField dyadic_maximal(const FieldVector& fv, const GridSpec& grid) {
    require_grid_matches(grid, fv.dim(), fv.level());
    std::vector<const ScalarField*> ptrs;
    for (const auto& f : fv.parts) ptrs.push_back(&f);
    CubeIntegralTable table(grid, ptrs);
    int m = fv.m();
    return detail::cell_center_max(fv.dim(), fv.level(), grid, [&](const DyadicCube& q) {
        double inv_vol = std::ldexp(1.0, q.level * q.dim);  // 1/|Q|
        double prod = 1.0;
        for (int i = 0; i < m; ++i)
            prod *= table.value(q.level, q.pos, static_cast<size_t>(i)) * inv_vol;
        return prod;
    });
}

/// sigma-weighted variant: product over i of (∫_Q f_i sigma_i) / sigma_i(Q).
/// Cubes with sigma_i(Q) = 0 for some i carry no information and are skipped.
inline ScalarField weighted_dyadic_maximal(const FieldVector& fv, const FieldVector& sigmas,
                                           const GridSpec& grid) {
    require_grid_matches(grid, fv.dim(), fv.level());
    if (sigmas.m() != fv.m() || sigmas.dim() != fv.dim() || sigmas.level() != fv.level())
        throw std::invalid_argument("weighted maximal: shape mismatch");
    int m = fv.m();
    std::vector<ScalarField> prods;
    for (int i = 0; i < m; ++i)
        prods.push_back(cellwise_product(fv[static_cast<size_t>(i)], sigmas[static_cast<size_t>(i)]));
    std::vector<const ScalarField*> ptrs;
    for (const auto& f : prods) ptrs.push_back(&f);
    for (const auto& s : sigmas.parts) ptrs.push_back(&s);
    CubeIntegralTable table(grid, ptrs);
    return detail::cell_center_max(fv.dim(), fv.level(), grid, [&](const DyadicCube& q) {
        double prod = 1.0;
        for (int i = 0; i < m; ++i) {
            double mass = table.value(q.level, q.pos, static_cast<size_t>(m + i));
            if (mass <= 0.0) return 0.0;
            prod *= table.value(q.level, q.pos, static_cast<size_t>(i)) / mass;
        }
        return prod;
    });
}

/// Logarithmic maximal function: max over containing cubes of the geometric
/// mean of f.
inline ScalarField logarithmic_maximal(const ScalarField& f, const GridSpec& grid) {
    require_grid_matches(grid, f.dim(), f.level());
    // Geometric means per enumerated cube, computed once.
    std::vector<std::vector<double>> gm(static_cast<size_t>(grid.resolution - kLevelFloor + 1));
    std::vector<std::array<std::int64_t, kMaxDim>> jmin(gm.size());
    std::vector<std::array<std::int64_t, kMaxDim>> ext(gm.size());
    for (int k = kLevelFloor; k <= grid.resolution; ++k) {
        size_t kk = static_cast<size_t>(k - kLevelFloor);
        std::int64_t count = 1;
        for (int d = 0; d < grid.dim; ++d) {
            std::int64_t hi;
            root_index_range(k, shift_offset(grid.shift_mask, k, d),
                             &jmin[kk][static_cast<size_t>(d)], &hi);
            ext[kk][static_cast<size_t>(d)] = hi - jmin[kk][static_cast<size_t>(d)] + 1;
            count *= ext[kk][static_cast<size_t>(d)];
        }
        gm[kk].resize(static_cast<size_t>(count));
        DyadicCube q;
        q.dim = grid.dim;
        q.shift_mask = grid.shift_mask;
        q.level = k;
        std::array<std::int64_t, kMaxDim> j = jmin[kk];
        for (std::int64_t ord = 0; ord < count; ++ord) {
            q.pos = j;
            gm[kk][static_cast<size_t>(ord)] = geometric_mean(f, q);
            int d = grid.dim - 1;
            while (d >= 0) {
                if (++j[static_cast<size_t>(d)] <
                    jmin[kk][static_cast<size_t>(d)] + ext[kk][static_cast<size_t>(d)])
                    break;
                j[static_cast<size_t>(d)] = jmin[kk][static_cast<size_t>(d)];
                --d;
            }
        }
    }
    return detail::cell_center_max(f.dim(), f.level(), grid, [&](const DyadicCube& q) {
        size_t kk = static_cast<size_t>(q.level - kLevelFloor);
        std::int64_t ord = 0;
        for (int d = 0; d < grid.dim; ++d)
            ord = ord * ext[kk][static_cast<size_t>(d)] +
                  (q.pos[static_cast<size_t>(d)] - jmin[kk][static_cast<size_t>(d)]);
        return gm[kk][static_cast<size_t>(ord)];
    });
}

/// Pointwise max of the per-grid maximal functions over all 2^n translated
/// grids. Comparable in both directions to the full (all-cubes) operator.
inline ScalarField cross_grid_maximal(const FieldVector& fv) {
    ScalarField out = ScalarField::constant(fv.dim(), fv.level(), 0.0);
    for (unsigned mask = 0; mask < (1u << fv.dim()); ++mask) {
        GridSpec g(fv.dim(), mask, fv.level());
        out = cellwise_max(out, dyadic_maximal(fv, g));
    }
    return out;
}

inline ScalarField maximal_by_backend(const FieldVector& fv, Backend backend) {
    if (backend == Backend::dyadic)
        return dyadic_maximal(fv, GridSpec(fv.dim(), 0, fv.level()));
    return cross_grid_maximal(fv);
}

}  // namespace dyw
