#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dyw/field.hpp"
#include "dyw/grid.hpp"

namespace dyw {

namespace detail {

inline void require_cube_for_field(const ScalarField& f, const DyadicCube& q) {
    if (q.dim != f.dim()) throw std::invalid_argument("cube/field dimension mismatch");
    if (q.level < kLevelFloor || q.level > f.level())
        throw std::invalid_argument("cube level outside [-2, resolution]");
}

/// Per-axis overlap lengths, in ticks of 1/(3*2^L), between the cube's axis-d
/// interval and each level-L cell interval it meets. Cells have 3 ticks.
struct AxisOverlap {
    std::int64_t c_lo = 0;
    std::int64_t c_hi = -1;                // inclusive; empty if c_hi < c_lo
    std::vector<std::int64_t> ticks;       // ticks[c - c_lo]
    std::int64_t root_ticks = 0;           // overlap of the cube interval with [0,1)
};

inline AxisOverlap axis_overlap(const DyadicCube& q, int d, int L) {
    AxisOverlap out;
    std::int64_t T = std::int64_t{3} << L;  // one axis of the root cube, in ticks
    std::int64_t a = corner_ticks(q, d, L);
    std::int64_t b = a + side_ticks(q.level, L);
    out.root_ticks = std::max<std::int64_t>(0, std::min(b, T) - std::max<std::int64_t>(a, 0));
    std::int64_t lo = std::max<std::int64_t>(a, 0);
    std::int64_t hi = std::min(b, T);
    if (lo >= hi) return out;
    out.c_lo = floor_div(lo, 3);
    out.c_hi = ceil_div(hi, 3) - 1;
    out.ticks.resize(static_cast<size_t>(out.c_hi - out.c_lo + 1));
    for (std::int64_t c = out.c_lo; c <= out.c_hi; ++c) {
        std::int64_t clo = 3 * c, chi = 3 * c + 3;
        out.ticks[static_cast<size_t>(c - out.c_lo)] =
            std::max<std::int64_t>(0, std::min(b, chi) - std::max(a, clo));
    }
    return out;
}

template <typename CellFn>
inline void for_each_overlapped_cell(const ScalarField& f, const DyadicCube& q, CellFn&& fn) {
    int n = f.dim();
    int L = f.level();
    std::array<AxisOverlap, kMaxDim> ax;
    for (int d = 0; d < n; ++d) {
        ax[static_cast<size_t>(d)] = axis_overlap(q, d, L);
        if (ax[static_cast<size_t>(d)].ticks.empty()) return;
    }
    std::array<std::int64_t, kMaxDim> c{0, 0, 0};
    for (int d = 0; d < n; ++d) c[static_cast<size_t>(d)] = ax[static_cast<size_t>(d)].c_lo;
    while (true) {
        std::int64_t w = 1;
        for (int d = 0; d < n; ++d) {
            const auto& a = ax[static_cast<size_t>(d)];
            w *= a.ticks[static_cast<size_t>(c[static_cast<size_t>(d)] - a.c_lo)];
        }
        if (w > 0) fn(f.index_of(c), w);
        int d = n - 1;
        while (d >= 0) {
            if (++c[static_cast<size_t>(d)] <= ax[static_cast<size_t>(d)].c_hi) break;
            c[static_cast<size_t>(d)] = ax[static_cast<size_t>(d)].c_lo;
            --d;
        }
        if (d < 0) break;
    }
}

}  // namespace detail

/// Exact overlap volume |Q ∩ [0,1)^n|.
inline double root_overlap_volume(const DyadicCube& q, int resolution) {
    int L = resolution;
    double v = 1.0;
    std::int64_t T = std::int64_t{3} << L;
    for (int d = 0; d < q.dim; ++d)
        v *= static_cast<double>(detail::axis_overlap(q, d, L).root_ticks) / static_cast<double>(T);
    return v;
}

inline bool cube_inside_root(const DyadicCube& q, int resolution) {
    int L = resolution;
    for (int d = 0; d < q.dim; ++d)
        if (detail::axis_overlap(q, d, L).root_ticks != side_ticks(q.level, L)) return false;
    return true;
}

/// ∫_Q f. Overlap volumes are exact integer tick counts; only the final
/// division is floating.
inline double integral_over_cube(const ScalarField& f, const DyadicCube& q) {
    detail::require_cube_for_field(f, q);
    double acc = 0.0;
    detail::for_each_overlapped_cell(
        f, q, [&](size_t idx, std::int64_t w) { acc += f[idx] * static_cast<double>(w); });
    double T = std::ldexp(3.0, f.level());  // 3*2^L, exact
    return acc / std::pow(T, f.dim());
}

inline double cube_average(const ScalarField& f, const DyadicCube& q) {
    return integral_over_cube(f, q) / cube_volume(q);
}

/// exp of the average of log f over Q. Returns 0 when f vanishes on a subset
/// of Q of positive measure (including the part of Q outside the root cube).
inline double geometric_mean(const ScalarField& f, const DyadicCube& q) {
    detail::require_cube_for_field(f, q);
    if (!cube_inside_root(q, f.level())) return 0.0;
    bool zero = false;
    double acc = 0.0;
    detail::for_each_overlapped_cell(f, q, [&](size_t idx, std::int64_t w) {
        if (f[idx] <= 0.0)
            zero = true;
        else
            acc += std::log(f[idx]) * static_cast<double>(w);
    });
    if (zero) return 0.0;
    double side = static_cast<double>(side_ticks(q.level, f.level()));
    return std::exp(acc / std::pow(side, f.dim()));
}

/// Inclusive per-axis range of cells whose center lies in Q.
struct CellBox {
    std::array<std::int64_t, kMaxDim> lo{0, 0, 0};
    std::array<std::int64_t, kMaxDim> hi{-1, -1, -1};
    bool empty = true;
};

inline CellBox cells_under(const DyadicCube& q, int resolution) {
    CellBox box;
    int L = resolution;
    std::int64_t cells = pow2i(L);
    for (int d = 0; d < q.dim; ++d) {
        std::int64_t corner = corner_ticks(q, d, L + 1);
        std::int64_t side = side_ticks(q.level, L + 1);
        std::int64_t lo = std::max<std::int64_t>(0, ceil_div(corner - 3, 6));
        std::int64_t hi = std::min<std::int64_t>(cells - 1, floor_div(corner + side - 4, 6));
        if (lo > hi) return box;
        box.lo[static_cast<size_t>(d)] = lo;
        box.hi[static_cast<size_t>(d)] = hi;
    }
    box.empty = false;
    return box;
}

template <typename Fn>
inline void for_each_cell_in_box(const ScalarField& shape, const CellBox& box, Fn&& fn) {
    if (box.empty) return;
    int n = shape.dim();
    std::array<std::int64_t, kMaxDim> c = box.lo;
    while (true) {
        fn(shape.index_of(c));
        int d = n - 1;
        while (d >= 0) {
            if (++c[static_cast<size_t>(d)] <= box.hi[static_cast<size_t>(d)]) break;
            c[static_cast<size_t>(d)] = box.lo[static_cast<size_t>(d)];
            --d;
        }
        if (d < 0) break;
    }
}

/// f * chi_Q sampled at cell centers; exact for standard-grid cubes since
/// those never cut cells.
inline ScalarField restrict_to_cube(const ScalarField& f, const DyadicCube& q) {
    detail::require_cube_for_field(f, q);
    std::vector<double> out(f.size(), 0.0);
    CellBox box = cells_under(q, f.level());
    for_each_cell_in_box(f, box, [&](size_t idx) { out[idx] = f[idx]; });
    return ScalarField(f.dim(), f.level(), std::move(out));
}

inline double weighted_integral(const ScalarField& g, const ScalarField& weight) {
    g.require_same_shape(weight);
    double acc = 0.0;
    for (size_t i = 0; i < g.size(); ++i) acc += g[i] * weight[i];
    return acc * g.cell_volume();
}

/// ||g||_{L^p(w)} over the root cube; exact for level-L fields.
inline double lp_norm(const ScalarField& g, double p, const ScalarField& weight) {
    g.require_same_shape(weight);
    double acc = 0.0;
    for (size_t i = 0; i < g.size(); ++i) acc += std::pow(g[i], p) * weight[i];
    return std::pow(acc * g.cell_volume(), 1.0 / p);
}

}  // namespace dyw
