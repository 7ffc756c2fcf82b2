#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "ruelle/pressure.hpp"
#include "ruelle/symbolic.hpp"
#include "ruelle/zeta.hpp"

using namespace ruelle;

TEST_CASE("primitive orbit enumeration") {
    IfsSystem g2 = build_gauss_ifs(2);
    auto orbits = enumerate_primitive_orbits(g2, 2);
    REQUIRE(orbits.size() == 3); // (1), (2), (1,2)

    // orbit (1): |gamma| = -2 log((sqrt5-1)/2)
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    bool found = false;
    for (const auto &o : orbits)
        if (o.lyndon_word.symbols == std::vector<int>{0}) {
            found = true;
            CHECK(o.length_gamma == doctest::Approx(-2.0 * std::log(golden)).epsilon(1e-12));
            CHECK(o.mult_sign == -1); // Gauss branches reverse orientation
        }
    CHECK(found);

    // invariant: length = -log(multiplier)
    for (const auto &o : enumerate_primitive_orbits(build_schottky_example(), 5)) {
        CHECK(o.length_gamma == doctest::Approx(-std::log(o.multiplier)).epsilon(1e-12));
        CHECK(o.mult_sign == 1);
    }
}

TEST_CASE("necklace identity against matrix powers") {
    for (const IfsSystem &sys : {build_gauss_ifs(2), build_gauss_ifs(3), build_schottky_example()}) {
        auto orbits = enumerate_primitive_orbits(sys, 10);
        std::map<int, std::uint64_t> per_period;
        for (const auto &o : orbits) ++per_period[o.lyndon_word.length()];
        for (int n = 1; n <= 10; ++n) {
            std::uint64_t sum = 0;
            for (int d = 1; d <= n; ++d)
                if (n % d == 0) sum += static_cast<std::uint64_t>(d) * per_period[d];
            CHECK(sum == count_words(sys, n, WordKind::Cyclic));
        }
    }
}

TEST_CASE("selberg product elementary limits") {
    IfsSystem g2 = build_gauss_ifs(2);
    ZetaProduct huge = selberg_zeta_product(g2, Complex(40.0, 0.0), 8);
    CHECK(std::abs(huge.value - 1.0) < 1e-15);
    CHECK(huge.certified);
    CHECK_FALSE(selberg_zeta_product(g2, Complex(0.9, 0.0), 6).certified);
}

TEST_CASE("product route agrees with determinant route") {
    IfsSystem g2 = build_gauss_ifs(2);
    IfsSystem sch = build_schottky_example();
    // s = 2 anchors
    {
        ZetaProduct zp = selberg_zeta_product(g2, Complex(2.0, 0.0), 16);
        DeterminantValue dd = zeta_via_determinant(g2, Complex(2.0, 0.0), 16);
        CHECK(std::abs(zp.value - dd.value) < 1e-6);
    }
    {
        ZetaProduct zp = selberg_zeta_product(sch, Complex(2.0, 0.0), 12);
        DeterminantValue dd = zeta_via_determinant(sch, Complex(2.0, 0.0), 12);
        CHECK(std::abs(zp.value - dd.value) < 1e-6);
    }
    // grid over Re s in [1.5, 3], Im s in [0, 5]
    for (double re : {1.5, 2.25, 3.0})
        for (double im : {0.0, 2.5, 5.0}) {
            const Complex s(re, im);
            CHECK(std::abs(selberg_zeta_product(g2, s, 16).value -
                           zeta_via_determinant(g2, s, 16).value) < 1e-6);
            CHECK(std::abs(selberg_zeta_product(sch, s, 12).value -
                           zeta_via_determinant(sch, s, 12).value) < 1e-6);
        }
}

TEST_CASE("determinant route against the collocation matrix") {
    IfsSystem g2 = build_gauss_ifs(2);
    for (double re : {1.5, 2.0, 3.0}) {
        const Complex s(re, 1.0);
        DeterminantValue dd = zeta_via_determinant(g2, s, 16);
        TransferMatrix tm = build_matrix(g2, SpectralParams::gkw(re, 1.0), 32);
        CHECK(std::abs(dd.value - matrix_determinant(tm, Complex(1.0, 0.0))) < 1e-5);
    }
}

TEST_CASE("zeta vanishes at the dimension") {
    for (const IfsSystem &sys : {build_gauss_ifs(2), build_schottky_example()}) {
        const double delta = hausdorff_dimension(sys, 10, 1e-7).dimension;
        TransferMatrix tm = build_matrix(sys, SpectralParams::gkw(delta, 0.0), 40);
        CHECK(std::abs(matrix_determinant(tm, Complex(1.0, 0.0))) < 1e-4);

        ResonanceCondition rc = resonance_condition(sys, Complex(delta, 0.0));
        CHECK(rc.verdict);
        CHECK(rc.gap < 1e-4);
    }
}

TEST_CASE("resonance condition away from the spectrum") {
    IfsSystem g2 = build_gauss_ifs(2);
    ResonanceCondition rc = resonance_condition(g2, Complex(2.0, 0.0));
    CHECK_FALSE(rc.verdict);
    CHECK(rc.gap > 0.1);
}

TEST_CASE("zero search") {
    IfsSystem sch = build_schottky_example();
    const double delta = hausdorff_dimension(sch, 10, 1e-7).dimension;

    ZeroSearchResult res =
        zero_search(sch, Complex(0.15, -0.04), Complex(0.75, 0.04), 13, 30);
    REQUIRE(res.zeros.size() == 1);
    CHECK(res.zeros[0].real() == doctest::Approx(delta).epsilon(5e-4));
    CHECK(std::abs(res.zeros[0].imag()) < 1e-6);
    for (const Complex &z : res.zeros) CHECK(resonance_condition(sch, z).verdict);

    // absolute-convergence region: no zeros
    ZeroSearchResult none = zero_search(sch, Complex(1.5, 0.0), Complex(2.5, 1.0), 9, 20);
    CHECK(none.zeros.empty());

    // stability under grid refinement
    ZeroSearchResult finer =
        zero_search(sch, Complex(0.15, -0.04), Complex(0.75, 0.04), 26, 30);
    REQUIRE(finer.zeros.size() == res.zeros.size());
    CHECK(std::abs(finer.zeros[0] - res.zeros[0]) < 1e-6);
}
