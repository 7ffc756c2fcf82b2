#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ruelle/ifs.hpp"
#include "ruelle/ifs_io.hpp"
#include "ruelle/symbolic.hpp"

using namespace ruelle;

namespace {

// Independent path-count oracle: trace / entry sums of integer powers of A.
std::uint64_t oracle_trace_pow(const IfsSystem &ifs, int n) {
    const int N = ifs.size();
    std::vector<std::vector<std::uint64_t>> R(N, std::vector<std::uint64_t>(N, 0)), A = R;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) A[i][j] = ifs.admissible(i, j) ? 1 : 0;
    for (int i = 0; i < N; ++i) R[i][i] = 1;
    for (int k = 0; k < n; ++k) {
        auto T = R;
        for (auto &row : T) row.assign(N, 0);
        for (int i = 0; i < N; ++i)
            for (int l = 0; l < N; ++l)
                for (int j = 0; j < N; ++j) T[i][j] += R[i][l] * A[l][j];
        R = T;
    }
    std::uint64_t tr = 0;
    for (int i = 0; i < N; ++i) tr += R[i][i];
    return tr;
}

IfsSystem overlapping_system() {
    // deliberately violates interval disjointness
    std::vector<Interval> ivs = {{0.0, 1.0}, {0.5, 2.0}};
    std::vector<std::vector<int>> adj = {{1, 1}, {1, 1}};
    std::vector<BranchMap> branches;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            branches.push_back(BranchMap::from_mobius(i, j, MobiusMap::gauss_branch(j + 3)));
    return IfsSystem(std::move(ivs), std::move(adj), std::move(branches), 0.2);
}

} // namespace

TEST_CASE("gauss construction") {
    IfsSystem g3 = build_gauss_ifs(3);
    REQUIRE(g3.size() == 3);
    CHECK(g3.interval(0).lo == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g3.interval(1).lo == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(g3.interval(2).lo == doctest::Approx(0.25).epsilon(1e-15));
    int n_branches = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (g3.admissible(i, j)) ++n_branches;
    CHECK(n_branches == 9);
    // branch (i=1, j=2) at x = 0.5 (1-based): 1/(0.5+2)
    CHECK(g3.branch(0, 1)(0.5) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(g3.branch(0, 1).mobius->det() == doctest::Approx(-1.0));

    IfsSystem g1 = build_gauss_ifs(1);
    REQUIRE(g1.size() == 1);
    CHECK(g1.branch(0, 0)(0.0) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(build_gauss_ifs(0), ConfigError);
}

TEST_CASE("verifier on gauss 3") {
    IfsSystem g3 = build_gauss_ifs(3);
    VerifyReport rep = verify_ifs(g3, 500);
    CHECK(rep.pass);
    CHECK(rep.intervals_disjoint);
    CHECK(rep.images_inside);
    CHECK(rep.images_disjoint);

    // oracle: maximize |g_j'(x)| = 1/(x+j)^2 over the constructed intervals by
    // dense sampling, independent of the library branch machinery
    double sup = 0.0;
    for (int j = 1; j <= 3; ++j)
        for (int i = 0; i < 3; ++i) {
            const Interval &iv = g3.interval(i);
            for (int k = 0; k <= 4000; ++k) {
                const double x = iv.lo + iv.length() * k / 4000.0;
                sup = std::max(sup, 1.0 / ((x + j) * (x + j)));
            }
        }
    // = ((N+1)/(N+2))^2 at x = a_N with j = 1
    CHECK(sup == doctest::Approx(0.64).epsilon(1e-10));
    CHECK(rep.sup_abs_deriv == doctest::Approx(sup).epsilon(1e-9));
    CHECK(rep.theta < 0.67);
    CHECK(rep.theta < 1.0);
}

TEST_CASE("verifier rejects overlapping intervals") {
    VerifyReport rep = verify_ifs(overlapping_system(), 50);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.intervals_disjoint);
    CHECK(rep.first_violation.find("intervals not disjoint") != std::string::npos);
}

TEST_CASE("schottky example") {
    IfsSystem sch = build_schottky_example();
    REQUIRE(sch.size() == 4);
    // adjacency: all ones except A_{i,i+2}
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(sch.admissible(i, j) == (j != (i + 2) % 4));

    VerifyReport rep = verify_ifs(sch, 400);
    CHECK(rep.pass);
    CHECK(rep.theta < 0.7);

    // non-unimodular generator rejected
    const double r5 = std::sqrt(5.0);
    std::vector<MobiusMap> bad = {MobiusMap(4.0, r5, -r5, -2.0), MobiusMap(-1.0, r5, -r5, 4.0)};
    CHECK_THROWS_AS(build_schottky_ifs(bad, sch.intervals()), ConfigError);
}

TEST_CASE("admissible word counts") {
    IfsSystem g3 = build_gauss_ifs(3);
    CHECK(admissible_words(g3, 2, WordKind::Past).size() == 9);
    CHECK(count_words(g3, 2, WordKind::Past) == 9);

    IfsSystem sch = build_schottky_example();
    CHECK(admissible_words(sch, 2, WordKind::Past).size() == 12);

    for (int n = 1; n <= 6; ++n) {
        CHECK(count_words(g3, n, WordKind::Cyclic) == oracle_trace_pow(g3, n));
        CHECK(count_words(sch, n, WordKind::Cyclic) == oracle_trace_pow(sch, n));
        CHECK(admissible_words(sch, n, WordKind::Cyclic).size() == oracle_trace_pow(sch, n));
    }
}

TEST_CASE("branch composition") {
    IfsSystem g3 = build_gauss_ifs(3);
    // word (1,1): g1 o g1 = (x+1)/(x+2)
    ComposedBranch c11 = compose_branch(g3, Word({0, 0}, WordKind::Past), 0);
    for (double x : {0.5, 0.6, 0.7, 0.85})
        CHECK(c11(x) == doctest::Approx((x + 1.0) / (x + 2.0)).epsilon(1e-14));

    // chain rule for word (1,2) at x = 0.5
    ComposedBranch c12 = compose_branch(g3, Word({0, 1}, WordKind::Past), 0);
    const double g1x = 1.0 / (0.5 + 1.0);
    const double expect = (-1.0 / ((g1x + 2.0) * (g1x + 2.0))) * (-1.0 / (1.5 * 1.5));
    CHECK(c12.deriv(0.5) == doctest::Approx(expect).epsilon(1e-14));

    // Mobius matrix of the composition agrees with pointwise composition on a grid
    for (int k = 0; k <= 20; ++k) {
        const double x = 0.5 + 0.4 * k / 20.0;
        const double pointwise = 1.0 / (1.0 / (x + 1.0) + 2.0);
        CHECK(c12.mobius(x) == doctest::Approx(pointwise).epsilon(1e-14));
    }
    CHECK(std::abs(c12.mobius.det()) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(compose_branch(build_schottky_example(), Word({0, 2}, WordKind::Past), 0),
                    ConfigError);
}

TEST_CASE("periodic points") {
    IfsSystem g3 = build_gauss_ifs(3);

    PeriodicPoint p1 = periodic_point(g3, Word({0}, WordKind::Cyclic));
    CHECK(p1.x == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-14));
    CHECK(p1.residual <= 1e-14);

    PeriodicPoint p2 = periodic_point(g3, Word({1}, WordKind::Cyclic));
    CHECK(p2.x == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));

    // word (1,2): fixed point of g2 o g1, frozen from independent iteration
    PeriodicPoint p12 = periodic_point(g3, Word({0, 1}, WordKind::Cyclic));
    CHECK(p12.x == doctest::Approx(0.36602540378443865).epsilon(1e-13));
    CHECK(p12.residual < 1e-14);

    // residuals stay at solver precision for every cyclic word up to length 8
    for (int n = 1; n <= 8; ++n) {
        double worst = 0.0;
        for_each_cyclic_word(g3, n, [&](const std::vector<int> &, const OrbitData &d) {
            worst = std::max(worst, d.residual);
        });
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("trapped set cover") {
    IfsSystem g3 = build_gauss_ifs(3);
    CHECK(trapped_set_cover(g3, 0).size() == 3);
    for (int depth : {1, 2, 3, 4}) {
        auto cover = trapped_set_cover(g3, depth);
        CHECK(cover.size() == static_cast<std::size_t>(std::pow(3.0, depth + 1)));
        double maxlen = 0.0, max_base = 0.0;
        for (const auto &iv : cover) maxlen = std::max(maxlen, iv.length());
        for (const auto &iv : g3.intervals()) max_base = std::max(max_base, iv.length());
        CHECK(maxlen <= std::pow(g3.theta(), depth) * max_base);
    }
}

TEST_CASE("cylinder nesting and separation") {
    IfsSystem g2 = build_gauss_ifs(2);
    for (int depth = 0; depth <= 7; ++depth) {
        auto parents = trapped_set_cover(g2, depth);
        auto children = trapped_set_cover(g2, depth + 1);
        for (const auto &ch : children) {
            int inside = 0;
            for (const auto &pa : parents)
                if (ch.lo >= pa.lo - 1e-15 && ch.hi <= pa.hi + 1e-15) ++inside;
            CHECK(inside >= 1);
        }
    }
    // depth-5 cylinders pairwise disjoint (symbolic injectivity)
    auto cyl = trapped_set_cover(build_gauss_ifs(3), 5);
    for (std::size_t p = 0; p < cyl.size(); ++p)
        for (std::size_t q = p + 1; q < cyl.size(); ++q)
            CHECK_FALSE(cyl[p].overlaps_interior(cyl[q], 1e-15));
}

TEST_CASE("coding points") {
    IfsSystem g3 = build_gauss_ifs(3);
    // constant word codes the fixed point of g1
    Word w(std::vector<int>(14, 0), WordKind::Past);
    CodedPoint cp = coding_point(g3, w, 12);
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(std::abs(cp.x - golden) <= cp.error_bound);
    CHECK(cp.error_bound == doctest::Approx(0.5 * cp.cylinder.length()));
    CHECK(cp.error_bound < 1e-4);

    // periodic points of distinct period-5 words are pairwise distinct
    std::vector<double> pts;
    for_each_cyclic_word(g3, 5, [&](const std::vector<int> &, const OrbitData &d) {
        pts.push_back(d.x);
    });
    CHECK(pts.size() == oracle_trace_pow(g3, 5));
    std::sort(pts.begin(), pts.end());
    double min_gap = 1.0;
    for (std::size_t k = 1; k < pts.size(); ++k)
        min_gap = std::min(min_gap, pts[k] - pts[k - 1]);
    CHECK(min_gap > 1e-9);
}

TEST_CASE("generic branch extension point") {
    // the same Gauss map wrapped as a plain smooth descriptor
    std::vector<Interval> ivs = {build_gauss_ifs(1).interval(0)};
    BranchMap b;
    b.source = 0;
    b.target = 0;
    b.value_fn = [](double x) { return 1.0 / (x + 1.0); };
    b.deriv_fn = [](double x) { return -1.0 / ((x + 1.0) * (x + 1.0)); };
    IfsSystem sys(ivs, {{1}}, {b}, 0.46);
    CHECK_FALSE(sys.all_mobius());
    PeriodicPoint p = periodic_point(sys, Word({0}, WordKind::Cyclic));
    CHECK(p.x == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("config round trip") {
    for (const auto &sys :
         {build_gauss_ifs(3), build_schottky_example()}) {
        const std::string text = ifs_to_json_text(sys);
        IfsSystem back = ifs_from_json_text(text);
        REQUIRE(back.size() == sys.size());
        for (int i = 0; i < sys.size(); ++i) {
            CHECK(back.interval(i).lo == doctest::Approx(sys.interval(i).lo).epsilon(1e-15));
            CHECK(back.interval(i).hi == doctest::Approx(sys.interval(i).hi).epsilon(1e-15));
        }
        for (int i = 0; i < sys.size(); ++i)
            for (int j = 0; j < sys.size(); ++j)
                CHECK(back.admissible(i, j) == sys.admissible(i, j));
    }
    CHECK_THROWS_AS(ifs_from_json_text("{\"kind\": \"nope\"}"), ConfigError);
    CHECK_THROWS_AS(ifs_from_json_text("not json"), ConfigError);
}
