#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "emofuse/postproc.hpp"
#include "emofuse/rng.hpp"

using namespace emofuse;

namespace {

Vec random_vec(Rng& rng, Index n, double scale) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = scale * rng.gaussian();
    return v;
}

}  // namespace

TEST_CASE("min_max_scale examples") {
    const Vec a = min_max_scale(Vec{{0.1, 0.2, 0.3}}, {-1.0, 1.0, 0.0});
    CHECK(a.isApprox(Vec{{-1, 0, 1}}, 1e-12));
    const Vec b = min_max_scale(Vec{{0, 1}}, {0.0, 1.0, 0.0});
    CHECK(b.isApprox(Vec{{0, 1}}, 1e-12));
    const Vec c = min_max_scale(Vec{{2, 4, 6}}, {0.0, 10.0, 0.0});
    CHECK(c.isApprox(Vec{{0, 5, 10}}, 1e-12));
    CHECK_THROWS_AS(min_max_scale(Vec{{2, 2, 2}}, {0.0, 1.0, 0.0}),
                    DegenerateInputError);
}

TEST_CASE("std_ratio_scale examples") {
    const Vec y{{1, 2, 3}};
    const double sigma_p = population_std(y);
    CHECK(std_ratio_scale(y, {0, 0, sigma_p}).isApprox(y, 1e-12));
    CHECK(std_ratio_scale(y, {0, 0, 2 * sigma_p}).isApprox(Vec{{2, 4, 6}}, 1e-12));
    CHECK(std_ratio_scale(Vec{{-1, 1}}, {0, 0, 0.0}).isApprox(Vec{{0, 0}}, 1e-12));
    CHECK_THROWS_AS(std_ratio_scale(Vec{{5, 5}}, {0, 0, 1.0}),
                    DegenerateInputError);
}

TEST_CASE("std_ratio_scale literal form") {
    const Vec y{{1, 2, 3}};
    const double sigma_p = population_std(y);
    const Vec lit = std_ratio_scale(y, {0, 0, 2.0 * sigma_p}, true);
    CHECK(lit.isApprox(0.5 * y, 1e-12));
    CHECK_THROWS_AS(std_ratio_scale(y, {0, 0, 0.0}, true), DegenerateInputError);
}

TEST_CASE("decimal_scale examples") {
    auto a = decimal_scale(Vec{{0.25, -0.5}});
    CHECK(a.exponent == 0);
    CHECK(a.values.isApprox(Vec{{0.25, -0.5}}, 1e-15));
    auto b = decimal_scale(Vec{{12, -3}});
    CHECK(b.exponent == 2);
    CHECK(b.values.isApprox(Vec{{0.12, -0.03}}, 1e-12));
    auto c = decimal_scale(Vec{{0.003, -0.0004}});
    CHECK(c.exponent == -2);
    CHECK(c.values.isApprox(Vec{{0.3, -0.04}}, 1e-12));
    auto z = decimal_scale(Vec{{0, 0}});
    CHECK(z.exponent == 0);
    CHECK(z.values.isApprox(Vec{{0, 0}}, 0));
}

TEST_CASE("apply_scaler dispatch") {
    const LabelStats stats{-1.0, 1.0, 1.0};
    CHECK(apply_scaler(ScalerKind::none, Vec{{1, 2, 3}}, stats)
              .isApprox(Vec{{1, 2, 3}}, 0));
    CHECK(apply_scaler(ScalerKind::min_max, Vec{{0.1, 0.2, 0.3}}, stats)
              .isApprox(Vec{{-1, 0, 1}}, 1e-12));
    CHECK(apply_scaler(ScalerKind::decimal, Vec{{12, -3}}, stats)
              .isApprox(Vec{{0.12, -0.03}}, 1e-12));
}

TEST_CASE("scaler names round-trip") {
    for (auto k : {ScalerKind::none, ScalerKind::min_max, ScalerKind::std_ratio,
                   ScalerKind::decimal})
        CHECK(parse_scaler(to_string(k)) == k);
    CHECK_THROWS_AS(parse_scaler("zscore"), InputError);
}

TEST_CASE("scaler properties on random vectors") {
    Rng rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.uniform_int(200));
        Vec y = random_vec(rng, n, std::pow(10.0, rng.uniform(-4.0, 4.0)));
        if (y.minCoeff() == y.maxCoeff()) continue;
        const LabelStats stats{rng.uniform(-2.0, 0.0), rng.uniform(0.1, 3.0),
                               rng.uniform(0.01, 5.0)};

        const Vec mm = min_max_scale(y, stats);
        CHECK(mm.minCoeff() == doctest::Approx(stats.min_l).epsilon(1e-10));
        CHECK(mm.maxCoeff() == doctest::Approx(stats.max_l).epsilon(1e-10));

        const Vec sr = std_ratio_scale(y, stats);
        CHECK(population_std(sr) ==
              doctest::Approx(stats.sigma_l).epsilon(1e-10));

        const auto dec = decimal_scale(y);
        const double peak = dec.values.cwiseAbs().maxCoeff();
        CHECK(peak < 1.0);
        CHECK(10.0 * peak >= 1.0);

        // order preservation and argmax invariance
        Index argmax_in;
        y.maxCoeff(&argmax_in);
        for (const Vec* out : {&mm, &sr, &dec.values}) {
            for (Index i = 0; i + 1 < n; ++i)
                if (y[i] <= y[i + 1]) CHECK((*out)[i] <= (*out)[i + 1]);
            Index argmax_out;
            out->maxCoeff(&argmax_out);
            CHECK((*out)[argmax_out] == (*out)[argmax_in]);
        }
    }
}
