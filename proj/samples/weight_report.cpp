// Minimal library walkthrough: build a two-weight system, evaluate its
// constants, and check the testing theorem on it.
#include <iostream>

#include "dyw/generate.hpp"
#include "dyw/verify.hpp"
#include "dyw/weights.hpp"

int main() {
    using namespace dyw;

    // A power-type weight at resolution L = 4 paired with itself, p = 2.
    ScalarField w = gen_dyadic_power(1, 4, 2.0);
    WeightSystem ws(w, FieldVector(std::vector<ScalarField>{w}), ExponentVector({2.0}));

    std::cout << ap_constant(ws).to_text() << "\n";
    std::cout << sp_constant(ws).to_text() << "\n";
    std::cout << bp_constant(ws).to_text() << "\n";
    std::cout << rh_constant(ws).to_text() << "\n";

    CheckResult r = sawyer_verify(ws, nullptr, 10, 7);
    for (const auto& rep : r.all()) std::cout << rep.to_text() << "\n";
    return r.ok() ? 0 : 1;
}
