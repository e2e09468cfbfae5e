#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <cmath>

namespace dyw {

/// Coarsest level used when enumerating cubes. Every translated grid has a
/// single level -2 cube that contains the whole root cube [0,1)^n, so sup-type
/// quantities over "all large cubes" are realized at levels >= kLevelFloor.
inline constexpr int kLevelFloor = -2;
inline constexpr int kMaxDim = 3;

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline std::int64_t pow2i(int e) { return std::int64_t{1} << e; }

/// One of the 2^n translated dyadic grids over R^n. Axis d of the grid with
/// shift bit set is translated by (-1)^k / 3 cube sidelengths at level k, so
/// cubes of consecutive levels still nest. shift_mask == 0 is the standard
/// grid, which contains the root cube [0,1)^n at level 0.
struct GridSpec {
    int dim = 1;
    unsigned shift_mask = 0;
    int resolution = 4;  // finest level L; fields live on the level-L partition

    GridSpec() = default;
    GridSpec(int n, unsigned mask, int level) : dim(n), shift_mask(mask), resolution(level) {
        validate();
    }

    void validate() const {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("GridSpec: dimension must be in 1..3");
        if (resolution < 1)
            throw std::invalid_argument("GridSpec: resolution must be positive");
        // Keeps every tick product exactly representable in int64 and double.
        if (dim * (resolution + 2) > 50)
            throw std::invalid_argument("GridSpec: dim*(resolution+2) too large for exact arithmetic");
        if (shift_mask >= (1u << dim))
            throw std::invalid_argument("GridSpec: shift mask out of range");
    }

    bool operator==(const GridSpec&) const = default;
};

/// Half-open cube 2^{-k}([0,1)^n + j + (-1)^k alpha/3). Corner coordinates are
/// rationals with denominator 3*2^k; all geometry below works in integer
/// "ticks" of 1/(3*2^scale) for a caller-chosen scale >= level.
struct DyadicCube {
    int dim = 1;
    unsigned shift_mask = 0;
    int level = 0;
    std::array<std::int64_t, kMaxDim> pos{0, 0, 0};

    bool operator==(const DyadicCube&) const = default;
};

/// Signed shift offset of axis d at the cube's level: (-1)^k * alpha_d.
inline int shift_offset(unsigned mask, int level, int d) {
    int bit = static_cast<int>((mask >> d) & 1u);
    return (level & 1) ? -bit : bit;
}

inline std::int64_t corner_ticks(const DyadicCube& q, int d, int scale) {
    return (3 * q.pos[static_cast<size_t>(d)] + shift_offset(q.shift_mask, q.level, d))
           << (scale - q.level);
}

inline std::int64_t side_ticks(int level, int scale) { return std::int64_t{3} << (scale - level); }

inline double cube_volume(const DyadicCube& q) { return std::ldexp(1.0, -q.level * q.dim); }

inline double cube_sidelength(const DyadicCube& q) { return std::ldexp(1.0, -q.level); }

/// Exact containment test; works across grids since both corner sets live in
/// (1/3)*2^{-scale} Z for scale = max of the two levels.
inline bool cube_contains(const DyadicCube& outer, const DyadicCube& inner) {
    if (outer.dim != inner.dim) return false;
    int scale = std::max(outer.level, inner.level);
    for (int d = 0; d < outer.dim; ++d) {
        std::int64_t olo = corner_ticks(outer, d, scale);
        std::int64_t ohi = olo + side_ticks(outer.level, scale);
        std::int64_t ilo = corner_ticks(inner, d, scale);
        std::int64_t ihi = ilo + side_ticks(inner.level, scale);
        if (ilo < olo || ihi > ohi) return false;
    }
    return true;
}

inline bool cubes_disjoint(const DyadicCube& a, const DyadicCube& b) {
    int scale = std::max(a.level, b.level);
    for (int d = 0; d < a.dim; ++d) {
        std::int64_t alo = corner_ticks(a, d, scale);
        std::int64_t ahi = alo + side_ticks(a.level, scale);
        std::int64_t blo = corner_ticks(b, d, scale);
        std::int64_t bhi = blo + side_ticks(b.level, scale);
        if (ahi <= blo || bhi <= alo) return true;
    }
    return false;
}

inline DyadicCube parent_of(const DyadicCube& q) {
    DyadicCube p = q;
    p.level = q.level - 1;
    for (int d = 0; d < q.dim; ++d) {
        // Children of parent index i at level k-1 have indices 2i + offset + {0,1}.
        int off = shift_offset(q.shift_mask, q.level - 1, d);
        p.pos[static_cast<size_t>(d)] = floor_div(q.pos[static_cast<size_t>(d)] - off, 2);
    }
    return p;
}

inline std::array<DyadicCube, 1 << kMaxDim> children_of(const DyadicCube& q, int* count) {
    std::array<DyadicCube, 1 << kMaxDim> out{};
    int n = q.dim;
    *count = 1 << n;
    for (int c = 0; c < (1 << n); ++c) {
        DyadicCube child = q;
        child.level = q.level + 1;
        for (int d = 0; d < n; ++d) {
            int off = shift_offset(q.shift_mask, q.level, d);
            child.pos[static_cast<size_t>(d)] =
                2 * q.pos[static_cast<size_t>(d)] + off + ((c >> d) & 1);
        }
        out[static_cast<size_t>(c)] = child;
    }
    return out;
}

/// Index range (inclusive) of level-k cubes whose intersection with the root
/// cube has positive volume, along one axis with shift offset e.
inline void root_index_range(int level, int offset, std::int64_t* j_min, std::int64_t* j_max) {
    *j_min = floor_div(-3 - offset, 3) + 1;
    if (level >= 0) {
        *j_max = floor_div(3 * pow2i(level) - offset - 1, 3);
    } else {
        std::int64_t s = pow2i(-level);
        *j_max = floor_div(2 - offset * s, 3 * s);
    }
}

/// All cubes of the grid at levels [k_min, k_max] meeting the root cube with
/// positive volume, in canonical (level, position-lexicographic) order.
inline std::vector<DyadicCube> enumerate_cubes(const GridSpec& g, int k_min, int k_max) {
    g.validate();
    if (k_min > k_max) return {};
    if (k_min < kLevelFloor || k_max > g.resolution)
        throw std::invalid_argument("enumerate_cubes: level range outside [-2, resolution]");
    std::vector<DyadicCube> out;
    for (int k = k_min; k <= k_max; ++k) {
        std::array<std::int64_t, kMaxDim> lo{0, 0, 0}, hi{0, 0, 0};
        for (int d = 0; d < g.dim; ++d)
            root_index_range(k, shift_offset(g.shift_mask, k, d),
                             &lo[static_cast<size_t>(d)], &hi[static_cast<size_t>(d)]);
        std::array<std::int64_t, kMaxDim> j = lo;
        while (true) {
            DyadicCube q;
            q.dim = g.dim;
            q.shift_mask = g.shift_mask;
            q.level = k;
            q.pos = j;
            out.push_back(q);
            int d = g.dim - 1;
            while (d >= 0) {
                if (++j[static_cast<size_t>(d)] <= hi[static_cast<size_t>(d)]) break;
                j[static_cast<size_t>(d)] = lo[static_cast<size_t>(d)];
                --d;
            }
            if (d < 0) break;
        }
    }
    return out;
}

/// The unique level-k cube of the grid containing the point with coordinates
/// num[d]/den (den > 0). Exact integer arithmetic.
inline DyadicCube containing_cube(const GridSpec& g, const std::array<std::int64_t, kMaxDim>& num,
                                  std::int64_t den, int level) {
    DyadicCube q;
    q.dim = g.dim;
    q.shift_mask = g.shift_mask;
    q.level = level;
    for (int d = 0; d < g.dim; ++d) {
        int e = shift_offset(g.shift_mask, level, d);
        std::int64_t j;
        if (level >= 0) {
            j = floor_div(3 * num[static_cast<size_t>(d)] * pow2i(level) - e * den, 3 * den);
        } else {
            std::int64_t s = pow2i(-level);
            j = floor_div(3 * num[static_cast<size_t>(d)] - e * den * s, 3 * den * s);
        }
        q.pos[static_cast<size_t>(d)] = j;
    }
    return q;
}

inline std::string cube_to_string(const DyadicCube& q) {
    std::string s = "alpha=" + std::to_string(q.shift_mask) + " level=" + std::to_string(q.level) +
                    " pos=";
    for (int d = 0; d < q.dim; ++d) {
        if (d) s += ",";
        s += std::to_string(q.pos[static_cast<size_t>(d)]);
    }
    return s;
}

}  // namespace dyw
