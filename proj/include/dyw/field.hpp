#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dyw/grid.hpp"

namespace dyw {

/// Nonnegative piecewise-constant function on the level-L partition of the
/// root cube [0,1)^n, implicitly zero outside. Cells are stored row-major with
/// the first coordinate slowest.
class ScalarField {
  public:
    ScalarField(int dim, int level, std::vector<double> cells)
        : dim_(dim), level_(level), cells_(std::move(cells)) {
        GridSpec(dim_, 0, level_);  // reuse the range checks
        if (cells_.size() != static_cast<size_t>(cell_count(dim_, level_)))
            throw std::invalid_argument("ScalarField: cell array has wrong length");
        for (double c : cells_)
            if (!(c >= 0.0) || !std::isfinite(c))
                throw std::invalid_argument("ScalarField: cells must be finite and nonnegative");
    }

    static ScalarField constant(int dim, int level, double value) {
        return ScalarField(dim, level, std::vector<double>(
                                           static_cast<size_t>(cell_count(dim, level)), value));
    }

    static std::int64_t cell_count(int dim, int level) { return pow2i(dim * level); }

    int dim() const { return dim_; }
    int level() const { return level_; }
    std::int64_t cells_per_axis() const { return pow2i(level_); }
    size_t size() const { return cells_.size(); }
    double cell_volume() const { return std::ldexp(1.0, -dim_ * level_); }

    double operator[](size_t i) const { return cells_[i]; }
    const std::vector<double>& cells() const { return cells_; }

    size_t index_of(const std::array<std::int64_t, kMaxDim>& c) const {
        std::int64_t s = cells_per_axis();
        std::int64_t idx = 0;
        for (int d = 0; d < dim_; ++d) idx = idx * s + c[static_cast<size_t>(d)];
        return static_cast<size_t>(idx);
    }

    std::array<std::int64_t, kMaxDim> coords_of(size_t index) const {
        std::array<std::int64_t, kMaxDim> c{0, 0, 0};
        std::int64_t s = cells_per_axis();
        auto idx = static_cast<std::int64_t>(index);
        for (int d = dim_ - 1; d >= 0; --d) {
            c[static_cast<size_t>(d)] = idx % s;
            idx /= s;
        }
        return c;
    }

    /// Integral over the root cube.
    double total_mass() const {
        double s = 0.0;
        for (double c : cells_) s += c;
        return s * cell_volume();
    }

    double max_cell() const {
        double m = 0.0;
        for (double c : cells_) m = std::max(m, c);
        return m;
    }

    ScalarField map(const std::function<double(double)>& fn) const {
        std::vector<double> out(cells_.size());
        for (size_t i = 0; i < cells_.size(); ++i) out[i] = fn(cells_[i]);
        return ScalarField(dim_, level_, std::move(out));
    }

    static ScalarField combine(const ScalarField& a, const ScalarField& b,
                               const std::function<double(double, double)>& fn) {
        a.require_same_shape(b);
        std::vector<double> out(a.size());
        for (size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i], b[i]);
        return ScalarField(a.dim_, a.level_, std::move(out));
    }

    void require_same_shape(const ScalarField& other) const {
        if (dim_ != other.dim_ || level_ != other.level_)
            throw std::invalid_argument("ScalarField: shape mismatch");
    }

  private:
    int dim_;
    int level_;
    std::vector<double> cells_;
};

inline ScalarField cellwise_product(const ScalarField& a, const ScalarField& b) {
    return ScalarField::combine(a, b, [](double x, double y) { return x * y; });
}

inline ScalarField cellwise_pow(const ScalarField& a, double e) {
    return a.map([e](double x) { return std::pow(x, e); });
}

inline ScalarField cellwise_max(const ScalarField& a, const ScalarField& b) {
    return ScalarField::combine(a, b, [](double x, double y) { return std::max(x, y); });
}

inline ScalarField cellwise_scale(const ScalarField& a, double c) {
    return a.map([c](double x) { return c * x; });
}

/// Tuple (f_1, ..., f_m) sharing one shape.
struct FieldVector {
    std::vector<ScalarField> parts;

    FieldVector() = default;
    explicit FieldVector(std::vector<ScalarField> p) : parts(std::move(p)) {
        if (parts.empty()) throw std::invalid_argument("FieldVector: needs at least one field");
        for (const auto& f : parts) parts.front().require_same_shape(f);
    }

    int m() const { return static_cast<int>(parts.size()); }
    int dim() const { return parts.front().dim(); }
    int level() const { return parts.front().level(); }
    const ScalarField& operator[](size_t i) const { return parts[i]; }
};

/// Exponent tuple (p_1, ..., p_m) with 1 < p_i < infinity, the harmonic-sum
/// exponent p (1/p = sum 1/p_i) and the conjugates p_i' = p_i/(p_i - 1).
class ExponentVector {
  public:
    explicit ExponentVector(std::vector<double> p) : p_(std::move(p)) {
        if (p_.empty()) throw std::invalid_argument("ExponentVector: empty");
        double inv = 0.0;
        for (double v : p_) {
            if (!(v > 1.0) || !std::isfinite(v))
                throw std::invalid_argument("ExponentVector: exponents must lie in (1, inf)");
            inv += 1.0 / v;
        }
        // m = 1 must reduce exactly, not through a rounded reciprocal pair.
        lebesgue_ = p_.size() == 1 ? p_[0] : 1.0 / inv;
    }

    int m() const { return static_cast<int>(p_.size()); }
    double p(int i) const { return p_[static_cast<size_t>(i)]; }
    double conjugate(int i) const { return p_[static_cast<size_t>(i)] / (p_[static_cast<size_t>(i)] - 1.0); }
    /// The combined exponent p; lies in (1/m, min p_i].
    double lebesgue() const { return lebesgue_; }
    double ratio(int i) const { return lebesgue_ / p_[static_cast<size_t>(i)]; }

    double conjugate_product() const {
        double r = 1.0;
        for (int i = 0; i < m(); ++i) r *= conjugate(i);
        return r;
    }

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < p_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(p_[i]);
        }
        return s;
    }

  private:
    std::vector<double> p_;
    double lebesgue_;
};

}  // namespace dyw
