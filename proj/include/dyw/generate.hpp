#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyw/field.hpp"
#include "dyw/weights.hpp"

namespace dyw {

/// Deterministic RNG: mt19937_64 with explicit double mappings so sequences
/// do not depend on library distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform in (0, 1].
    double uniform() { return static_cast<double>((bits() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(bits() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double normal() {
        // Box-Muller; one value per call keeps replay trivial.
        double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

  private:
    std::mt19937_64 eng_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline ScalarField gen_constant(int dim, int level, double value) {
    if (!(value >= 0.0)) throw std::invalid_argument("gen: constant must be nonnegative");
    return ScalarField::constant(dim, level, value);
}

/// Jump by `ratio` on the upper half along the first axis.
inline ScalarField gen_step(int dim, int level, double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("gen: step ratio must be positive");
    ScalarField shape = ScalarField::constant(dim, level, 0.0);
    std::int64_t half = pow2i(level - 1);
    std::vector<double> cells(shape.size());
    for (size_t i = 0; i < cells.size(); ++i)
        cells[i] = shape.coords_of(i)[0] >= half ? ratio : 1.0;
    return ScalarField(dim, level, std::move(cells));
}

/// Power-type weight concentrated at the origin: value base^{z} where z sums,
/// per axis, the number of leading zero bits of the cell index (so the cell
/// touching 0 gets base^{nL}).
inline ScalarField gen_dyadic_power(int dim, int level, double base) {
    if (!(base > 0.0)) throw std::invalid_argument("gen: power base must be positive");
    ScalarField shape = ScalarField::constant(dim, level, 0.0);
    std::vector<double> cells(shape.size());
    auto leading_zeros = [level](std::int64_t c) {
        int bits = 0;
        while (c > 0) {
            ++bits;
            c >>= 1;
        }
        return level - bits;
    };
    for (size_t i = 0; i < cells.size(); ++i) {
        auto co = shape.coords_of(i);
        int z = 0;
        for (int d = 0; d < dim; ++d) z += leading_zeros(co[static_cast<size_t>(d)]);
        cells[i] = std::pow(base, z);
    }
    return ScalarField(dim, level, std::move(cells));
}

inline ScalarField gen_checkerboard(int dim, int level, double lo, double hi) {
    if (!(lo >= 0.0) || !(hi >= 0.0)) throw std::invalid_argument("gen: checkerboard values >= 0");
    ScalarField shape = ScalarField::constant(dim, level, 0.0);
    std::vector<double> cells(shape.size());
    for (size_t i = 0; i < cells.size(); ++i) {
        auto co = shape.coords_of(i);
        std::int64_t parity = 0;
        for (int d = 0; d < dim; ++d) parity += co[static_cast<size_t>(d)];
        cells[i] = (parity & 1) ? hi : lo;
    }
    return ScalarField(dim, level, std::move(cells));
}

/// Lognormal cells clamped to a fixed conditioning window.
inline ScalarField gen_lognormal(int dim, int level, double spread, Rng& rng) {
    size_t count = static_cast<size_t>(ScalarField::cell_count(dim, level));
    std::vector<double> cells(count);
    for (size_t i = 0; i < count; ++i)
        cells[i] = std::clamp(std::exp(spread * rng.normal()), 1e-3, 1e3);
    return ScalarField(dim, level, std::move(cells));
}

inline ScalarField random_positive_field(Rng& rng, int dim, int level, double spread = 0.8) {
    return gen_lognormal(dim, level, spread, rng);
}

/// Nonnegative field with occasional zero cells (exercises the degenerate
/// competitor paths).
inline ScalarField random_nonneg_field(Rng& rng, int dim, int level, double zero_prob = 0.2) {
    ScalarField f = gen_lognormal(dim, level, 0.8, rng);
    std::vector<double> cells(f.cells());
    for (auto& c : cells)
        if (rng.uniform() < zero_prob) c = 0.0;
    return ScalarField(dim, level, std::move(cells));
}

inline FieldVector random_field_vector(Rng& rng, int m, int dim, int level, bool with_zeros) {
    std::vector<ScalarField> parts;
    for (int i = 0; i < m; ++i)
        parts.push_back(with_zeros ? random_nonneg_field(rng, dim, level)
                                   : random_positive_field(rng, dim, level));
    return FieldVector(std::move(parts));
}

inline WeightSystem random_weight_system(Rng& rng, int dim, int level, const ExponentVector& p) {
    std::vector<ScalarField> w;
    for (int i = 0; i < p.m(); ++i) w.push_back(random_positive_field(rng, dim, level, 0.7));
    ScalarField v = random_positive_field(rng, dim, level, 0.9);
    return WeightSystem(std::move(v), FieldVector(std::move(w)), p);
}

/// System with v equal to the product weight of w, the natural one-weight
/// regime for the norm comparisons.
inline WeightSystem random_canonical_weight_system(Rng& rng, int dim, int level,
                                                   const ExponentVector& p) {
    std::vector<ScalarField> w;
    for (int i = 0; i < p.m(); ++i) w.push_back(random_positive_field(rng, dim, level, 0.7));
    FieldVector wv(std::move(w));
    ScalarField v = WeightSystem::product_power(wv, p);
    return WeightSystem(std::move(v), std::move(wv), p);
}

}  // namespace dyw
