#include <doctest.h>

#include <cmath>

#include "herzlab/corpus.hpp"
#include "herzlab/maximal.hpp"

using namespace herz;

namespace {

StepFunction unit_box(int n) {
    Box b;
    for (int i = 0; i < n; ++i) b.edges.emplace_back(Rational(0), Rational(1));
    return from_boxes({{b, Complex(1.0, 0.0)}});
}

// independent enumeration over endpoint pairs with direct integration
double oracle_1d(const StepFunction& f, double x) {
    std::vector<double> pts{x};
    std::vector<std::array<double, 3>> cells;
    for (auto& [key, v] : f.cells) {
        Interval c = f.mesh.cell(0, key[0]);
        cells.push_back({c.lo.to_double(), c.hi.to_double(), std::abs(v)});
        pts.push_back(c.lo.to_double());
        pts.push_back(c.hi.to_double());
        pts.push_back(c.midpoint().to_double());
    }
    double best = 0.0;
    for (auto& c : cells)
        if (c[0] <= x && x < c[1]) best = c[2];
    for (double a : pts)
        for (double b : pts) {
            if (!(a <= x && x <= b && b > a)) continue;
            double mass = 0.0;
            for (auto& c : cells) {
                double lo = std::max(c[0], a), hi = std::min(c[1], b);
                if (hi > lo) mass += c[2] * (hi - lo);
            }
            best = std::max(best, mass / (b - a));
        }
    return best;
}

}  // namespace

TEST_CASE("directional maximal pointwise values") {
    StepFunction f = unit_box(1);
    CHECK(directional_maximal_at(f, 0, {2.0}) == doctest::Approx(0.5));
    CHECK(directional_maximal_at(f, 0, {0.5}) == doctest::Approx(1.0));
    CHECK(directional_maximal_at(f, 0, {-1.0}) == doctest::Approx(0.5));
}

TEST_CASE("directional maximal matches the enumeration oracle") {
    Rng rng(2003);
    CorpusLimits lim;
    lim.max_pieces = 10;
    for (int t = 0; t < 60; ++t) {
        StepFunction f = random_step(rng, 1, lim);
        for (int s = 0; s < 5; ++s) {
            double x = rng.uniform(-20.0, 20.0);
            CHECK(directional_maximal_at(f, 0, {x}) ==
                  doctest::Approx(oracle_1d(f, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("sampled directional field") {
    StepFunction f = unit_box(1);
    SampledField field = directional_maximal_field(f, 0, 1);
    CHECK(field.base.eval(std::vector<double>{0.5}).real() == doctest::Approx(1.0));
    // decay region is represented
    CHECK(field.base.eval(std::vector<double>{1.75}).real() > 0.0);

    Rng rng(2011);
    CorpusLimits lim;
    for (int t = 0; t < 10; ++t) {
        StepFunction g = random_step(rng, 1, lim);
        SampledField m = directional_maximal_field(g, 0, 2);
        // dominates |g| at midpoints of support cells
        for (auto& [key, v] : g.cells) {
            double x = g.mesh.cell(0, key[0]).midpoint().to_double();
            CHECK(m.base.eval(std::vector<double>{x}).real() >= std::abs(v) * (1.0 - 1e-12));
        }
        // homogeneity at samples
        Complex c(rng.uniform(0.5, 3.0), 0.0);
        SampledField mc = directional_maximal_field(g.map_scale(c), 0, 2);
        CHECK(max_cell_difference(mc.base, m.base.map_scale(Complex(std::abs(c), 0.0))) <=
              1e-9 * std::max(1.0, m.base.max_abs()));
    }
}

TEST_CASE("iterated maximal operator") {
    StepFunction f = unit_box(2);
    SampledField it = iterated_maximal(f, 1.0, 8);
    double v = it.base.eval(std::vector<double>{2.0, 2.0}).real();
    CHECK(std::fabs(v - 0.25) <= 0.02);

    // t-th root consistency at the sample cells
    Rng rng(2017);
    CorpusLimits lim;
    StepFunction g = random_step(rng, 1, lim, false, true);
    SampledField a = iterated_maximal(g, 2.0, 2);
    SampledField b = iterated_maximal(g.map_abs().map_power(Complex(2.0, 0.0)), 1.0, 2);
    StepFunction broot = b.base.map_power(Complex(0.5, 0.0));
    CHECK(max_cell_difference(a.base, broot) <= 1e-9 * std::max(1.0, broot.max_abs()));

    StepFunction zero(f.mesh);
    CHECK(iterated_maximal(zero, 1.0, 2).base.is_zero());
}

TEST_CASE("maximal bracket") {
    StepFunction f = unit_box(1);
    auto [lower, upper] = hl_maximal_bracket(f, 4);

    // oracle: centered average of 1_{[0,1)} over [x-h, x+h] for dyadic h
    auto dyadic_avg_max = [](double x) {
        double best = 0.0;
        for (int j = -8; j <= 8; ++j) {
            double h = std::exp2(j);
            double overlap = std::min(x + h, 1.0) - std::max(x - h, 0.0);
            if (overlap > 0.0) best = std::max(best, overlap / (2.0 * h));
        }
        return best;
    };
    // at x = 2 the best dyadic scale is h = 2 with average 1/4
    CHECK(dyadic_avg_max(2.0) == doctest::Approx(0.25).epsilon(1e-12));
    // the sampled field carries that oracle value at the cell midpoint
    int cell = lower.base.mesh.locate(0, Rational(2));
    REQUIRE(cell >= 0);
    double mid = lower.base.mesh.cell(0, cell).midpoint().to_double();
    double got = lower.base.eval(std::vector<double>{2.0}).real();
    CHECK(got == doctest::Approx(dyadic_avg_max(mid)).epsilon(1e-12));
    CHECK(dominated_by(lower.base, upper.base, 1e-9));

    StepFunction zero(f.mesh);
    auto [zl, zu] = hl_maximal_bracket(zero, 2);
    CHECK(zl.base.is_zero());
    CHECK(zu.base.is_zero());

    Rng rng(2027);
    CorpusLimits lim;
    lim.max_pieces = 4;
    for (int t = 0; t < 5; ++t) {
        StepFunction g = random_step(rng, t % 2 ? 2 : 1, lim, false);
        auto [lo, up] = hl_maximal_bracket(g, 2);
        CHECK(dominated_by(lo.base, up.base, 1e-9));
    }
}

TEST_CASE("sublinearity and monotonicity at sample points") {
    Rng rng(2029);
    CorpusLimits lim;
    for (int t = 0; t < 20; ++t) {
        StepFunction f = random_step(rng, 1, lim);
        StepFunction g = random_step(rng, 1, lim);
        StepFunction sum = step_combine(f, g, CombineOp::add);
        for (int s = 0; s < 4; ++s) {
            double x = rng.uniform(-10.0, 10.0);
            double mf = directional_maximal_at(f, 0, {x});
            double mg = directional_maximal_at(g, 0, {x});
            CHECK(directional_maximal_at(sum, 0, {x}) <= mf + mg + 1e-9);
        }
        // |f| <= |f| + |g| cellwise
        StepFunction absf = f.map_abs(), big = step_combine(f.map_abs(), g.map_abs(), CombineOp::add);
        for (int s = 0; s < 4; ++s) {
            double x = rng.uniform(-10.0, 10.0);
            CHECK(directional_maximal_at(absf, 0, {x}) <=
                  directional_maximal_at(big, 0, {x}) + 1e-12);
        }
    }
}

TEST_CASE("norm ratios of maximal images") {
    Rng rng(2039);
    CorpusLimits lim;
    MaximalOp op;
    op.kind = MaximalOp::iterated;
    op.t = 1.0;
    for (int t = 0; t < 6; ++t) {
        StepFunction f = random_step(rng, 1, lim, false);
        HerzParams params;
        Exponent q = random_exponent(rng, false, false);
        params.alpha.push_back(rng.uniform(-q.recip() + 0.1, 1.0 - q.recip() - 0.1));
        params.p.push_back(random_exponent(rng, false, false));
        params.q.push_back(q);
        double r = boundedness_ratio(op, f, params, 4);
        CHECK(r >= 1.0 - 1e-6);
        double rc = boundedness_ratio(op, f.map_scale(Complex(3.0, 0.0)), params, 4);
        CHECK(rc == doctest::Approx(r).epsilon(1e-12));
    }
    StepFunction zero(unit_box(1).mesh);
    HerzParams p22 = HerzParams::uniform(1, 0.0, Exponent(2.0), Exponent(2.0));
    CHECK_THROWS_AS(boundedness_ratio(op, zero, p22, 2), std::domain_error);

    // divergent input is flagged before any experiment
    StepFunction tail = unit_box(1);
    HerzParams bad = HerzParams::uniform(1, -0.75, Exponent(2.0), Exponent(2.0));
    CHECK(std::isinf(mixed_herz_norm(tail, bad)));
    CHECK_THROWS_AS(boundedness_ratio(op, tail, bad, 2), std::domain_error);
}

TEST_CASE("vector-valued ratio") {
    Rng rng(2053);
    CorpusLimits lim;
    StepFunction f = random_step(rng, 1, lim, false);
    HerzParams params = HerzParams::uniform(1, 0.1, Exponent(2.0), Exponent(2.0));
    SequenceField single(f.mesh);
    single.entries.emplace(0, f);
    MaximalOp op;
    op.kind = MaximalOp::iterated;
    op.t = 1.0;
    CHECK(fs_vector_ratio(single, params, Exponent(2.0), 4) ==
          doctest::Approx(boundedness_ratio(op, f, params, 4)).epsilon(1e-12));
    CHECK_THROWS_AS(fs_vector_ratio(single, params, Exponent::inf(), 2), std::domain_error);
    SequenceField empty(f.mesh);
    CHECK_THROWS_AS(fs_vector_ratio(empty, params, Exponent(2.0), 2), std::domain_error);
}

TEST_CASE("iterated majorant") {
    Rng rng(2063);
    CorpusLimits lim;
    StepFunction h = random_step(rng, 1, lim, false, true);
    SampledField r0 = rubio_francia(h, 0, 1.0, 2);
    CHECK(max_cell_difference(r0.base, h) == 0.0);

    HerzParams d = dual_params(HerzParams::uniform(1, 0.1, Exponent(2.0), Exponent(2.0)));
    double h_norm = mixed_herz_norm(h, d);
    SampledField stage = directional_maximal_field(h, 0, 2);
    double normM = std::max(1.0, mixed_herz_norm(stage.base, d) / h_norm);
    SampledField R = rubio_francia(h, 4, normM, 2);
    CHECK(dominated_by(h, R.base, 1e-12));
    CHECK(mixed_herz_norm(R.base, d) <= 2.0 * h_norm * (1.0 + std::exp2(-4.0)));
}

TEST_CASE("dual-weighted integrals") {
    StepFunction zero(unit_box(1).mesh);
    auto [zl, zr] = stein_dual_check(zero, unit_box(1), 1.5, 2);
    CHECK(zl == 0.0);
    CHECK(zr == 0.0);

    Rng rng(2069);
    CorpusLimits lim;
    StepFunction f = random_step(rng, 1, lim, false);
    StepFunction phi = random_step(rng, 1, lim, false, true);
    auto [l1, r1] = stein_dual_check(f, phi, 2.0, 2);
    double c = 1.75;
    auto [l2, r2] = stein_dual_check(f.map_scale(Complex(c, 0.0)), phi, 2.0, 2);
    CHECK(l2 == doctest::Approx(l1 * c * c).epsilon(1e-9));
    CHECK(r2 == doctest::Approx(r1 * c * c).epsilon(1e-9));
    CHECK(l1 > 0.0);
    CHECK(r1 > 0.0);
}
