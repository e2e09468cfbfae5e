#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyw/field.hpp"
#include "dyw/grid.hpp"
#include "dyw/integrate.hpp"
#include "dyw/maximal.hpp"

namespace dyw {

/// Weight system (v, w_1..w_m, exponents) with the derived dual weights
/// sigma_i = w_i^{1-p_i'} and the product weights nu_w, nu_sigma. Immutable;
/// derived fields are computed once at construction. w cells must be strictly
/// positive so the duals stay finite; v may vanish on cells.
class WeightSystem {
  public:
    WeightSystem(ScalarField v, FieldVector w, ExponentVector p)
        : v_(std::move(v)), w_(std::move(w)), p_(std::move(p)) {
        if (w_.m() != p_.m()) throw std::invalid_argument("WeightSystem: m mismatch");
        v_.require_same_shape(w_[0]);
        for (const auto& wi : w_.parts)
            for (size_t c = 0; c < wi.size(); ++c)
                if (!(wi[c] > 0.0))
                    throw std::invalid_argument("WeightSystem: weight cells must be positive");
        std::vector<ScalarField> sig;
        for (int i = 0; i < w_.m(); ++i)
            sig.push_back(cellwise_pow(w_[static_cast<size_t>(i)], 1.0 - p_.conjugate(i)));
        sigma_ = FieldVector(std::move(sig));
        nu_w_ = product_power(w_, p_);
        nu_sigma_ = product_power(sigma_, p_);
    }

    /// prod_i fields_i^{p/p_i}, the natural product weight.
    static ScalarField product_power(const FieldVector& fields, const ExponentVector& p) {
        ScalarField out = ScalarField::constant(fields.dim(), fields.level(), 1.0);
        for (int i = 0; i < fields.m(); ++i)
            out = cellwise_product(out, cellwise_pow(fields[static_cast<size_t>(i)], p.ratio(i)));
        return out;
    }

    const ScalarField& v() const { return v_; }
    const FieldVector& w() const { return w_; }
    const ExponentVector& exponents() const { return p_; }
    const FieldVector& dual_weights() const { return sigma_; }
    const ScalarField& nu_w() const { return nu_w_; }
    const ScalarField& nu_sigma() const { return nu_sigma_; }
    int dim() const { return v_.dim(); }
    int level() const { return v_.level(); }
    int m() const { return w_.m(); }

  private:
    ScalarField v_;
    FieldVector w_;
    ExponentVector p_;
    FieldVector sigma_{std::vector<ScalarField>{ScalarField::constant(1, 1, 1.0)}};
    ScalarField nu_w_ = ScalarField::constant(1, 1, 1.0);
    ScalarField nu_sigma_ = ScalarField::constant(1, 1, 1.0);
};

struct ConstantReport {
    std::string name;
    double value = 0.0;
    bool defined = true;   // false when every cube was skipped
    DyadicCube cube{};     // attaining cube (first maximizer in canonical order)
    Backend backend = Backend::dyadic;
    int level_lo = kLevelFloor;
    int level_hi = 0;

    std::string to_text() const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        std::string s = "constant=" + name + " value=" + (defined ? buf : "undefined") + " " +
                        cube_to_string(cube) + " backend=" + backend_name(backend) +
                        " levels=" + std::to_string(level_lo) + ".." + std::to_string(level_hi);
        return s;
    }
};

namespace detail {

/// Visit the enumerated cube set of the backend in canonical order:
/// grids by ascending mask (only mask 0 for the dyadic backend), then
/// (level, position) within each grid.
template <typename Fn>
inline void for_each_backend_cube(int dim, int resolution, Backend backend, Fn&& fn) {
    unsigned mask_count = backend == Backend::dyadic ? 1u : (1u << dim);
    for (unsigned mask = 0; mask < mask_count; ++mask) {
        GridSpec g(dim, mask, resolution);
        for (const DyadicCube& q : enumerate_cubes(g, kLevelFloor, resolution)) fn(q);
    }
}

struct SupTracker {
    double best = 0.0;
    bool any = false;
    DyadicCube cube{};
    void offer(double v, const DyadicCube& q) {
        if (!any || v > best) {
            best = v;
            cube = q;
            any = true;
        }
    }
};

inline ConstantReport finish(const std::string& name, const SupTracker& t, Backend backend,
                             int resolution) {
    ConstantReport r;
    r.name = name;
    r.value = t.best;
    r.defined = t.any;
    r.cube = t.cube;
    r.backend = backend;
    r.level_lo = kLevelFloor;
    r.level_hi = resolution;
    return r;
}

}  // namespace detail

/// Joint Muckenhoupt-type constant on slots (v, sigma):
/// sup_Q avg_Q(v) * prod_i avg_Q(sigma_i)^{p/p_i'}.
inline ConstantReport ap_from(const ScalarField& v, const FieldVector& sigma,
                              const ExponentVector& p, Backend backend = Backend::dyadic) {
    detail::SupTracker t;
    detail::for_each_backend_cube(v.dim(), v.level(), backend, [&](const DyadicCube& q) {
        double term = cube_average(v, q);
        for (int i = 0; i < sigma.m(); ++i)
            term *= std::pow(cube_average(sigma[static_cast<size_t>(i)], q),
                             p.lebesgue() / p.conjugate(i));
        t.offer(term, q);
    });
    return detail::finish("ap", t, backend, v.level());
}

inline ConstantReport ap_constant(const WeightSystem& ws, Backend backend = Backend::dyadic) {
    return ap_from(ws.v(), ws.dual_weights(), ws.exponents(), backend);
}

/// Fujii-Wilson-type constant on a weight tuple:
/// sup_Q ∫_Q prod_i M(w_i chi_Q)^{p/p_i} / ∫_Q prod_i w_i^{p/p_i},
/// with M given by the backend. Zero-mass cubes are skipped.
inline ConstantReport winfty_from(const FieldVector& weights, const ExponentVector& p,
                                  Backend backend = Backend::dyadic) {
    ScalarField nu = WeightSystem::product_power(weights, p);
    detail::SupTracker t;
    detail::for_each_backend_cube(weights.dim(), weights.level(), backend, [&](const DyadicCube& q) {
        double den = integral_over_cube(nu, q);
        if (den <= 0.0) return;
        ScalarField integrand = ScalarField::constant(weights.dim(), weights.level(), 1.0);
        for (int i = 0; i < weights.m(); ++i) {
            FieldVector one(std::vector<ScalarField>{
                restrict_to_cube(weights[static_cast<size_t>(i)], q)});
            integrand = cellwise_product(integrand,
                                         cellwise_pow(maximal_by_backend(one, backend), p.ratio(i)));
        }
        t.offer(integral_over_cube(integrand, q) / den, q);
    });
    return detail::finish("winfty", t, backend, weights.level());
}

inline ConstantReport winfty_constant(const WeightSystem& ws, Backend backend = Backend::dyadic) {
    return winfty_from(ws.w(), ws.exponents(), backend);
}

/// Mixed arithmetic/geometric constant on slots (v, w):
/// sup_Q (v(Q)/|Q|) (prod_i w_i(Q)/|Q|)^p exp(avg_Q log prod_i w_i^{-p/p_i}).
inline ConstantReport bp_from(const ScalarField& v, const FieldVector& weights,
                              const ExponentVector& p, Backend backend = Backend::dyadic) {
    for (const auto& wi : weights.parts)
        for (size_t c = 0; c < wi.size(); ++c)
            if (!(wi[c] > 0.0))
                throw std::invalid_argument("bp: weight cells must be positive");
    ScalarField neg = ScalarField::constant(weights.dim(), weights.level(), 1.0);
    for (int i = 0; i < weights.m(); ++i)
        neg = cellwise_product(neg, cellwise_pow(weights[static_cast<size_t>(i)], -p.ratio(i)));
    detail::SupTracker t;
    detail::for_each_backend_cube(v.dim(), v.level(), backend, [&](const DyadicCube& q) {
        double prod_avg = 1.0;
        for (int i = 0; i < weights.m(); ++i)
            prod_avg *= cube_average(weights[static_cast<size_t>(i)], q);
        double term = cube_average(v, q) * std::pow(prod_avg, p.lebesgue()) *
                      geometric_mean(neg, q);
        t.offer(term, q);
    });
    return detail::finish("bp", t, backend, v.level());
}

inline ConstantReport bp_constant(const WeightSystem& ws, Backend backend = Backend::dyadic) {
    return bp_from(ws.v(), ws.w(), ws.exponents(), backend);
}

/// Testing quotient at one cube: || M(sigma chi_Q) ||_{L^p(v)} over the whole
/// root cube, divided by prod_i sigma_i(Q)^{1/p_i}. With this normalization
/// the quotient at Q is exactly the norm quotient of the indicator trial
/// f_i = chi_Q, so the testing constant is a true lower bound for the
/// operator norm with constant one.
inline double sp_quotient(const ScalarField& v, const FieldVector& sigma, const ExponentVector& p,
                          const DyadicCube& q, Backend backend = Backend::dyadic) {
    double den = 1.0;
    for (int i = 0; i < sigma.m(); ++i) {
        double mass = integral_over_cube(sigma[static_cast<size_t>(i)], q);
        if (mass <= 0.0) return -1.0;  // skipped
        den *= std::pow(mass, 1.0 / p.p(i));
    }
    std::vector<ScalarField> restricted;
    for (int i = 0; i < sigma.m(); ++i)
        restricted.push_back(restrict_to_cube(sigma[static_cast<size_t>(i)], q));
    ScalarField M = maximal_by_backend(FieldVector(std::move(restricted)), backend);
    return lp_norm(M, p.lebesgue(), v) / den;
}

/// Sawyer-type testing constant: sup over cubes of sp_quotient.
inline ConstantReport sp_from(const ScalarField& v, const FieldVector& sigma,
                              const ExponentVector& p, Backend backend = Backend::dyadic) {
    detail::SupTracker t;
    detail::for_each_backend_cube(v.dim(), v.level(), backend, [&](const DyadicCube& q) {
        double quot = sp_quotient(v, sigma, p, q, backend);
        if (quot >= 0.0) t.offer(quot, q);
    });
    return detail::finish("sp", t, backend, v.level());
}

inline ConstantReport sp_constant(const WeightSystem& ws, Backend backend = Backend::dyadic) {
    return sp_from(ws.v(), ws.dual_weights(), ws.exponents(), backend);
}

/// Reverse-Holder-type constant of the dual tuple:
/// sup_Q prod_i sigma_i(Q)^{p/p_i} / ∫_Q prod_i sigma_i^{p/p_i}.
/// Identically 1 when m = 1. +inf is a valid value (condition fails).
inline ConstantReport rh_from(const FieldVector& sigma, const ExponentVector& p,
                              Backend backend = Backend::dyadic) {
    ScalarField nu = WeightSystem::product_power(sigma, p);
    detail::SupTracker t;
    detail::for_each_backend_cube(sigma.dim(), sigma.level(), backend, [&](const DyadicCube& q) {
        double num = 1.0;
        for (int i = 0; i < sigma.m(); ++i)
            num *= std::pow(integral_over_cube(sigma[static_cast<size_t>(i)], q), p.ratio(i));
        double den = integral_over_cube(nu, q);
        if (den <= 0.0) {
            if (num > 0.0) t.offer(std::numeric_limits<double>::infinity(), q);
            return;  // 0/0 carries no information
        }
        t.offer(num / den, q);
    });
    return detail::finish("rh", t, backend, sigma.level());
}

inline ConstantReport rh_constant(const WeightSystem& ws, Backend backend = Backend::dyadic) {
    return rh_from(ws.dual_weights(), ws.exponents(), backend);
}

/// Hruscev-type constant sup_Q avg_Q(w) / gm_Q(w), over cubes lying inside
/// the root cube (outside them the zero extension makes the ratio diverge).
inline ConstantReport hruscev_ainfty(const ScalarField& w, Backend backend = Backend::dyadic) {
    for (size_t c = 0; c < w.size(); ++c)
        if (!(w[c] > 0.0))
            throw std::invalid_argument("hruscev: weight must be positive on all cells");
    detail::SupTracker t;
    detail::for_each_backend_cube(w.dim(), w.level(), backend, [&](const DyadicCube& q) {
        if (!cube_inside_root(q, w.level())) return;
        t.offer(cube_average(w, q) / geometric_mean(w, q), q);
    });
    return detail::finish("hruscev", t, backend, w.level());
}

/// Fujii-Wilson constant of a single weight; the m = 1 case of winfty_from.
inline ConstantReport fujii_ainfty(const ScalarField& w, Backend backend = Backend::dyadic) {
    ConstantReport r = winfty_from(FieldVector(std::vector<ScalarField>{w}),
                                   ExponentVector({2.0}), backend);
    r.name = "fujii";
    return r;
}

}  // namespace dyw
