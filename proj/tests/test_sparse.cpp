#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dyw/generate.hpp"
#include "dyw/sparse.hpp"

using namespace dyw;

namespace {
std::vector<std::uint32_t> cells_of(std::initializer_list<std::uint32_t> l) { return l; }
}  // namespace

TEST_CASE("level-set family of a single indicator") {
    // chi_[0,1/8) at L = 3 with a = 4: thresholds 1/16 and 1/4. The coarse
    // shell selects the root cube, the fine one selects [0,1/4).
    ScalarField f(1, 3, {1, 0, 0, 0, 0, 0, 0, 0});
    GridSpec g(1, 0, 3);
    SparseFamily fam = build_sparse_family(FieldVector(std::vector<ScalarField>{f}), g, 4.0);

    REQUIRE(fam.shells.size() == 2);
    CHECK(fam.shells[0].k == -2);
    REQUIRE(fam.shells[0].cubes.size() == 1);
    CHECK(fam.shells[0].cubes[0].level == 0);
    CHECK(fam.shells[0].cubes[0].pos[0] == 0);
    CHECK(fam.shells[0].omega_cells == cells_of({0, 1, 2, 3, 4, 5, 6, 7}));
    CHECK(fam.shells[0].e_cells[0] == cells_of({2, 3, 4, 5, 6, 7}));

    CHECK(fam.shells[1].k == -1);
    REQUIRE(fam.shells[1].cubes.size() == 1);
    CHECK(fam.shells[1].cubes[0].level == 2);
    CHECK(fam.shells[1].cubes[0].pos[0] == 0);
    CHECK(fam.shells[1].omega_cells == cells_of({0, 1}));
    CHECK(fam.shells[1].e_cells[0] == cells_of({0, 1}));

    FamilyValidation val = validate_family(fam, FieldVector(std::vector<ScalarField>{f}));
    CHECK(val.ok());
}

TEST_CASE("constant pair gives a single covering shell") {
    FieldVector fv(std::vector<ScalarField>{ScalarField::constant(1, 3, 1.0),
                                            ScalarField::constant(1, 3, 1.0)});
    GridSpec g(1, 0, 3);
    SparseFamily fam = build_sparse_family(fv, g, 8.0);
    REQUIRE(fam.shells.size() == 1);
    CHECK(fam.shells[0].k == -1);
    REQUIRE(fam.shells[0].cubes.size() == 1);
    // the selected cube covers the root; its remainder cells are the root
    DyadicCube root{1, 0, 0, {0, 0, 0}};
    CHECK(cube_contains(fam.shells[0].cubes[0], root));
    CHECK(fam.shells[0].e_cells[0].size() == 8);
    CHECK(validate_family(fam, fv).ok());
}

TEST_CASE("degenerate and invalid inputs") {
    GridSpec g(1, 0, 2);
    FieldVector zero(std::vector<ScalarField>{ScalarField::constant(1, 2, 0.0)});
    CHECK(build_sparse_family(zero, g, 4.0).empty());
    FieldVector ones(std::vector<ScalarField>{ScalarField::constant(1, 2, 1.0)});
    CHECK_THROWS_AS(build_sparse_family(ones, g, 1.0), std::invalid_argument);
}

TEST_CASE("family axioms hold on random inputs") {
    Rng rng(51);
    for (int t = 0; t < 60; ++t) {
        int m = 1 + t % 2;
        FieldVector fv = random_field_vector(rng, m, 1, 4, t % 2 == 0);
        GridSpec g(1, 0, 4);
        double a = std::ldexp(1.0, m * 2);
        SparseFamily fam = build_sparse_family(fv, g, a);
        FamilyValidation val = validate_family(fam, fv);
        REQUIRE(val.disjoint);
        REQUIRE(val.nested);
        REQUIRE(val.half_packing);
        REQUIRE(val.comparable);
        REQUIRE(val.covered);
        REQUIRE(val.sandwich);
    }
}

TEST_CASE("shifted-grid families validate too") {
    Rng rng(52);
    for (int t = 0; t < 30; ++t) {
        FieldVector fv = random_field_vector(rng, 2, 1, 4, t % 3 == 0);
        GridSpec g(1, 1, 4);
        SparseFamily fam = build_sparse_family(fv, g, 16.0);
        REQUIRE(validate_family(fam, fv).ok());
    }
}

TEST_CASE("sparse operator") {
    SECTION("single root cube family") {
        FieldVector fv(std::vector<ScalarField>{ScalarField::constant(1, 2, 2.0),
                                                ScalarField::constant(1, 2, 3.0)});
        SparseFamily fam;
        fam.grid = GridSpec(1, 0, 2);
        fam.base = 4.0;
        SparseShell sh;
        sh.k = 0;
        sh.threshold = 1.0;
        sh.cubes.push_back(DyadicCube{1, 0, 0, {0, 0, 0}});
        sh.products.push_back(6.0);
        sh.e_cells.push_back({0, 1, 2, 3});
        sh.omega_cells = {0, 1, 2, 3};
        fam.shells.push_back(sh);
        ScalarField A = sparse_operator(fv, fam);
        for (size_t i = 0; i < A.size(); ++i) CHECK(A[i] == Catch::Approx(6.0));
    }

    SECTION("worked two-cube family") {
        ScalarField f(1, 3, {1, 0, 0, 0, 0, 0, 0, 0});
        FieldVector fv(std::vector<ScalarField>{f});
        GridSpec g(1, 0, 3);
        SparseFamily fam = build_sparse_family(fv, g, 4.0);
        ScalarField A = sparse_operator(fv, fam);
        // root contributes 1/8 everywhere, [0,1/4) contributes 1/2 on its cells
        std::vector<double> want{0.625, 0.625, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125};
        for (size_t i = 0; i < want.size(); ++i) CHECK(A[i] == Catch::Approx(want[i]));
    }

    SECTION("empty family gives zero") {
        FieldVector fv(std::vector<ScalarField>{ScalarField::constant(1, 2, 1.0)});
        SparseFamily fam;
        fam.grid = GridSpec(1, 0, 2);
        ScalarField A = sparse_operator(fv, fam);
        for (size_t i = 0; i < A.size(); ++i) CHECK(A[i] == 0.0);
    }
}

TEST_CASE("selected cubes sit in the threshold sandwich") {
    Rng rng(53);
    for (int t = 0; t < 40; ++t) {
        int m = 1 + t % 2;
        FieldVector fv = random_field_vector(rng, m, 1, 4, false);
        GridSpec g(1, 0, 4);
        double a = std::ldexp(1.0, m * 2);
        SparseFamily fam = build_sparse_family(fv, g, a);
        for (const auto& sh : fam.shells)
            for (size_t i = 0; i < sh.cubes.size(); ++i) {
                double prod = 1.0;
                for (int f = 0; f < m; ++f)
                    prod *= cube_average(fv[static_cast<size_t>(f)], sh.cubes[i]);
                REQUIRE(prod > sh.threshold);
                REQUIRE(prod <= std::ldexp(1.0, m) * sh.threshold * (1 + 1e-12));
            }
    }
}

TEST_CASE("level sets decompose into the remainder sets") {
    Rng rng(54);
    for (int t = 0; t < 30; ++t) {
        FieldVector fv = random_field_vector(rng, 2, 1, 4, t % 2 == 0);
        GridSpec g(1, 0, 4);
        SparseFamily fam = build_sparse_family(fv, g, 16.0);
        for (size_t s = 0; s < fam.shells.size(); ++s) {
            std::vector<std::uint32_t> all_e;
            for (const auto& e : fam.shells[s].e_cells) all_e.insert(all_e.end(), e.begin(), e.end());
            std::sort(all_e.begin(), all_e.end());
            std::vector<std::uint32_t> diff;
            const auto& omega = fam.shells[s].omega_cells;
            if (s + 1 < fam.shells.size()) {
                const auto& next = fam.shells[s + 1].omega_cells;
                std::set_difference(omega.begin(), omega.end(), next.begin(), next.end(),
                                    std::back_inserter(diff));
            } else {
                diff = omega;
            }
            REQUIRE(all_e == diff);
        }
    }
}

TEST_CASE("sparse domination of the cross-grid maximal") {
    SECTION("constants") {
        FieldVector fv(std::vector<ScalarField>{ScalarField::constant(1, 3, 1.0)});
        VerificationReport r = sparse_domination_check(fv);
        CHECK(r.pass);
        CHECK(r.left <= 1.0 + 1e-12);
    }
    SECTION("indicator") {
        ScalarField f(1, 3, {1, 0, 0, 0, 0, 0, 0, 0});
        VerificationReport r = sparse_domination_check(FieldVector(std::vector<ScalarField>{f}));
        CHECK(r.pass);
    }
    SECTION("random bilinear inputs") {
        Rng rng(55);
        for (int t = 0; t < 40; ++t) {
            FieldVector fv = random_field_vector(rng, 2, 1, 4, t % 2 == 0);
            VerificationReport r = sparse_domination_check(fv);
            REQUIRE(r.pass);
        }
    }
}

TEST_CASE("family serialization lists cubes per shell") {
    ScalarField f(1, 3, {1, 0, 0, 0, 0, 0, 0, 0});
    FieldVector fv(std::vector<ScalarField>{f});
    SparseFamily fam = build_sparse_family(fv, GridSpec(1, 0, 3), 4.0);
    std::string text = family_to_text(fam);
    CHECK(text.find("k=-2") != std::string::npos);
    CHECK(text.find("k=-1") != std::string::npos);
    CHECK(text.find("alpha=0") != std::string::npos);
}
