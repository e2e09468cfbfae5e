#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>

#include "dyw/io.hpp"

namespace {

std::string tool() { return DYW_TOOL_PATH; }

int run(const std::string& args) {
    int rc = std::system((tool() + " " + args + " > cli_stdout.txt 2> cli_stderr.txt").c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("gen writes loadable fields") {
    SECTION("constant") {
        REQUIRE(run("gen --kind constant --value 1 --n 1 --level 3 --out cli_ones.json") == 0);
        dyw::ScalarField f = dyw::load_field("cli_ones.json");
        CHECK(f.size() == 8);
        CHECK(f[0] == 1.0);
    }
    SECTION("step matches the worked cells") {
        REQUIRE(run("gen --kind step --ratio 4 --n 1 --level 3 --out cli_step.json") == 0);
        dyw::ScalarField f = dyw::load_field("cli_step.json");
        CHECK(f.cells() == std::vector<double>{1, 1, 1, 1, 4, 4, 4, 4});
    }
    SECTION("lognormal generation is reproducible byte for byte") {
        REQUIRE(run("gen --kind lognormal --seed 7 --n 1 --level 4 --out cli_ln1.json") == 0);
        REQUIRE(run("gen --kind lognormal --seed 7 --n 1 --level 4 --out cli_ln2.json") == 0);
        CHECK(dyw::read_text_file("cli_ln1.json") == dyw::read_text_file("cli_ln2.json"));
    }
    SECTION("unknown kind is invalid input") {
        CHECK(run("gen --kind sinusoid --out cli_x.json") == 2);
    }
}

TEST_CASE("constants subcommand") {
    REQUIRE(run("gen --kind step --ratio 4 --n 1 --level 3 --out cli_w.json") == 0);
    SECTION("step weight constants, A_2 value visible") {
        REQUIRE(run("constants --v cli_w.json --w cli_w.json --p 2 --out cli_consts.txt") == 0);
        std::string text = dyw::read_text_file("cli_consts.txt");
        CHECK(text.find("constant=ap value=1.5625") != std::string::npos);
        CHECK(text.find("constant=rh value=1 ") != std::string::npos);
    }
    SECTION("missing file is invalid input") {
        CHECK(run("constants --v does_not_exist.json --w cli_w.json --p 2") == 2);
    }
    SECTION("bad exponent is invalid input") {
        CHECK(run("constants --v cli_w.json --w cli_w.json --p 0.5") == 2);
    }
}

TEST_CASE("verify subcommand") {
    SECTION("small pass run exits zero") {
        CHECK(run("verify --suite sawyer --seed 3 --systems 1 --trials 3 --p 2") == 0);
    }
    SECTION("explicit all-ones system passes the testing suite") {
        REQUIRE(run("gen --kind constant --value 1 --n 1 --level 3 --out cli_one.json") == 0);
        CHECK(run("verify --suite sawyer --v cli_one.json --w cli_one.json --p 2 --trials 3") == 0);
        CHECK(run("verify --suite all --v cli_one.json --w cli_one.json --p 2 --trials 3") == 0);
    }
    SECTION("hypothesis violation is refused with exit 2") {
        CHECK(run("verify --suite carleson --seed 3 --systems 1 --trials 2 --p 1.5,1.5") == 2);
    }
    SECTION("results files are byte-identical across runs") {
        REQUIRE(run("verify --suite bp --seed 11 --systems 1 --trials 3 --p 4,4 --out cli_r1.txt") ==
                0);
        REQUIRE(run("verify --suite bp --seed 11 --systems 1 --trials 3 --p 4,4 --out cli_r2.txt") ==
                0);
        CHECK(dyw::read_text_file("cli_r1.txt") == dyw::read_text_file("cli_r2.txt"));
    }
}

TEST_CASE("sparse subcommand") {
    REQUIRE(run("gen --kind lognormal --seed 5 --n 1 --level 4 --out cli_f.json") == 0);
    SECTION("family dump and validation") {
        REQUIRE(run("sparse --f cli_f.json --alpha 0 --out cli_fam.txt") == 0);
        std::string text = dyw::read_text_file("cli_fam.txt");
        CHECK(text.find("sparse-family alpha=0") != std::string::npos);
        CHECK(text.find("axioms: valid") != std::string::npos);
    }
    SECTION("threshold ratio at most one is invalid") {
        CHECK(run("sparse --f cli_f.json --a 1") == 2);
    }
}
