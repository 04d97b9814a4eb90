#include <doctest.h>

#include <cmath>

#include "herzlab/corpus.hpp"
#include "herzlab/norms.hpp"

using namespace herz;

namespace {

StepFunction annular_pair_1d() {
    // indicator of (-2,-1/2] u [1/2,2), measure 3
    Box neg, pos;
    neg.edges = {Interval(Rational(-2), Rational(-1, 2))};
    pos.edges = {Interval(Rational(1, 2), Rational(2))};
    return from_boxes({{neg, Complex(1.0, 0.0)}, {pos, Complex(1.0, 0.0)}});
}

StepFunction annular_square() {
    std::vector<std::pair<Box, Complex>> pieces;
    Rational lo(1, 2), hi(2);
    for (int mask = 0; mask < 4; ++mask) {
        Box b;
        b.edges.push_back((mask & 1) ? Interval(-hi, -lo) : Interval(lo, hi));
        b.edges.push_back((mask & 2) ? Interval(-hi, -lo) : Interval(lo, hi));
        pieces.emplace_back(b, Complex(1.0, 0.0));
    }
    return from_boxes(pieces);
}

StepFunction unit_tail_1d() {
    Box b;
    b.edges = {Interval(Rational(0), Rational(1))};
    return from_boxes({{b, Complex(1.0, 0.0)}});
}

HerzParams params1(double a, Exponent p, Exponent q) { return HerzParams::uniform(1, a, p, q); }

}  // namespace

TEST_CASE("one-dimensional Herz norms") {
    StepFunction f = annular_pair_1d();
    CHECK(herz_norm_1d(f, 0.0, Exponent(1.0), Exponent(1.0)) == doctest::Approx(3.0));

    StepFunction zero(f.mesh);
    CHECK(herz_norm_1d(zero, 0.0, Exponent(1.0), Exponent(1.0)) == 0.0);

    StepFunction tail = unit_tail_1d();
    CHECK(herz_norm_1d(tail, 0.0, Exponent(1.0), Exponent(1.0)) == doctest::Approx(1.0));
    CHECK(std::isinf(herz_norm_1d(tail, -1.0, Exponent(1.0), Exponent::inf())));
}

TEST_CASE("engine agrees with direct annulus-intersection quadrature") {
    // independent route: intersect every cell with every annulus explicitly,
    // truncating the annulus range far below the breakpoints
    auto oracle = [](const StepFunction& f, double alpha, double p, double q) {
        double total = 0.0;
        for (int k = -400; k <= 40; ++k) {
            double lo = std::exp2((double)(k - 1)), hi = std::exp2((double)k);
            double sq = 0.0;
            for (auto& [key, v] : f.cells) {
                Interval c = f.mesh.cell(0, key[0]);
                double l = c.lo.to_double(), h = c.hi.to_double();
                double pos = std::max(0.0, std::min(h, hi) - std::max(l, lo));
                double neg = std::max(0.0, std::min(h, -lo) - std::max(l, -hi));
                sq += std::pow(std::abs(v), q) * (pos + neg);
            }
            if (sq > 0.0) total += std::exp2(k * p * alpha) * std::pow(sq, p / q);
        }
        return std::pow(total, 1.0 / p);
    };
    Rng rng(61);
    CorpusLimits lim;
    lim.max_pieces = 6;
    for (int t = 0; t < 40; ++t) {
        StepFunction f = t % 3 == 0 ? random_tail_step(rng, 1, lim) : random_step(rng, 1, lim);
        double q = rng.uniform(0.5, 4.0), p = rng.uniform(0.5, 4.0);
        double alpha = rng.uniform(-1.0 / q + 0.05, 1.0);  // keep the tail summable
        double got = herz_norm_1d(f, alpha, Exponent(p), Exponent(q));
        double want = oracle(f, alpha, p, q);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("two-dimensional iterated norm agrees with nested quadrature") {
    // literal nested loops over explicit annulus windows, no shared machinery
    auto oracle2d = [](const StepFunction& f, const HerzParams& P) {
        double a1 = P.alpha[0], a2 = P.alpha[1];
        double p1 = P.p[0].v, q1 = P.q[0].v, p2 = P.p[1].v, q2 = P.q[1].v;
        std::map<int, double> outer_bucket;  // annulus of x2 -> integral of inner^{q2}
        const Axis& ax2 = f.mesh.axes[1];
        for (int c2 = 0; c2 + 1 < (int)ax2.size(); ++c2) {
            Interval cell2(ax2[c2], ax2[c2 + 1]);
            if (cell2.lo.is_zero() || cell2.hi.is_zero() || cell2.zero_in_interior()) continue;
            // inner 1-D norm at any x2 in this cell
            double inner_total = 0.0;
            for (int k1 = -40; k1 <= 40; ++k1) {
                double lo = std::exp2((double)(k1 - 1)), hi = std::exp2((double)k1);
                double sq = 0.0;
                for (auto& [key, v] : f.cells) {
                    if (key[1] != c2) continue;
                    Interval c = f.mesh.cell(0, key[0]);
                    double l = c.lo.to_double(), h = c.hi.to_double();
                    double pos = std::max(0.0, std::min(h, hi) - std::max(l, lo));
                    double neg = std::max(0.0, std::min(h, -lo) - std::max(l, -hi));
                    sq += std::pow(std::abs(v), q1) * (pos + neg);
                }
                if (sq > 0.0) inner_total += std::exp2(k1 * p1 * a1) * std::pow(sq, p1 / q1);
            }
            if (inner_total <= 0.0) continue;
            double inner = std::pow(inner_total, 1.0 / p1);
            int k2 = annulus_index(cell2.midpoint());
            outer_bucket[k2] += std::pow(inner, q2) * cell2.length().to_double();
        }
        double total = 0.0;
        for (auto& [k2, sq] : outer_bucket)
            total += std::exp2(k2 * p2 * a2) * std::pow(sq, p2 / q2);
        return std::pow(total, 1.0 / p2);
    };
    Rng rng(67);
    CorpusLimits lim;
    lim.max_pieces = 6;
    for (int t = 0; t < 25; ++t) {
        StepFunction f = random_step(rng, 2, lim);
        HerzParams P;
        for (int i = 0; i < 2; ++i) {
            P.alpha.push_back(rng.uniform(-0.8, 0.8));
            P.p.push_back(Exponent(rng.uniform(0.7, 3.5)));
            P.q.push_back(Exponent(rng.uniform(0.7, 3.5)));
        }
        CHECK(mixed_herz_norm(f, P) == doctest::Approx(oracle2d(f, P)).epsilon(1e-10));
    }
}

TEST_CASE("reduce_inner: separable slices") {
    Rng rng(51);
    CorpusLimits lim;
    lim.max_pieces = 4;
    for (int t = 0; t < 15; ++t) {
        StepFunction u = random_step(rng, 1, lim);
        StepFunction v = random_step(rng, 1, lim);
        // tensor product u(x1) v(x2)
        TensorMesh mesh;
        mesh.axes = {u.mesh.axes[0], v.mesh.axes[0]};
        StepFunction prod(mesh);
        for (auto& [ku, cu] : u.cells)
            for (auto& [kv, cv] : v.cells) prod.cells[{ku[0], kv[0]}] = cu * cv;
        double a = rng.uniform(-0.5, 0.5);
        Exponent p = random_exponent(rng), q = random_exponent(rng);
        StepFunction red = reduce_inner(prod, a, p, q);
        double un = herz_norm_1d(u, a, p, q);
        StepFunction expect = v.map_abs().map_scale(Complex(un, 0.0));
        CHECK(max_cell_difference(red, expect) <= 1e-12 * std::max(1.0, expect.max_abs()));
    }
}

TEST_CASE("reduce_inner collapses the annular square to its 1-D trace") {
    StepFunction sq = annular_square();
    StepFunction red = reduce_inner(sq, 0.0, Exponent(1.0), Exponent(1.0));
    StepFunction expect = annular_pair_1d().map_scale(Complex(3.0, 0.0));
    CHECK(max_cell_difference(red, expect) <= 1e-12 * 3.0);

    StepFunction zero(sq.mesh);
    CHECK(reduce_inner(zero, 0.0, Exponent(1.0), Exponent(1.0)).is_zero());
}

TEST_CASE("mixed Herz norm examples") {
    StepFunction sq = annular_square();
    HerzParams p11 = HerzParams::uniform(2, 0.0, Exponent(1.0), Exponent(1.0));
    CHECK(mixed_herz_norm(sq, p11) == doctest::Approx(9.0).epsilon(1e-12));

    HerzParams p22 = HerzParams::uniform(2, 0.5, Exponent(2.0), Exponent(2.0));
    CHECK(mixed_herz_norm(sq, p22) == doctest::Approx(5.0).epsilon(1e-12));

    // homogeneity
    Rng rng(77);
    CorpusLimits lim;
    for (int t = 0; t < 20; ++t) {
        int n = rng.uniform_int(1, 3);
        StepFunction f = random_step(rng, n, lim);
        HerzParams params;
        for (int i = 0; i < n; ++i) {
            params.alpha.push_back(rng.uniform(-1.0, 1.0));
            params.p.push_back(random_exponent(rng));
            params.q.push_back(random_exponent(rng));
        }
        Complex c(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        double lhs = mixed_herz_norm(f.map_scale(c), params);
        double rhs = std::abs(c) * mixed_herz_norm(f, params);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("norm breakdown replays the value") {
    Rng rng(78);
    CorpusLimits lim;
    for (int t = 0; t < 10; ++t) {
        int n = rng.uniform_int(2, 3);
        StepFunction f = random_step(rng, n, lim);
        HerzParams params;
        for (int i = 0; i < n; ++i) {
            params.alpha.push_back(rng.uniform(-0.5, 0.5));
            params.p.push_back(random_exponent(rng));
            params.q.push_back(random_exponent(rng));
        }
        NormBreakdown bd;
        double v = mixed_herz_norm(f, params, &bd);
        CHECK(bd.replay(params) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("dual parameters") {
    HerzParams a = HerzParams::uniform(2, 0.0, Exponent(1.0), Exponent(1.0));
    HerzParams d = dual_params(a);
    CHECK(d.p[0].is_inf());
    CHECK(d.q[1].is_inf());

    HerzParams b;
    b.alpha = {0.5, -1.0 / 3.0};
    b.p = {Exponent(2.0), Exponent(3.0)};
    b.q = {Exponent(4.0), Exponent(1.5)};
    HerzParams bd = dual_params(b);
    CHECK(bd.alpha[0] == doctest::Approx(-0.5));
    CHECK(bd.alpha[1] == doctest::Approx(1.0 / 3.0));
    CHECK(bd.p[0].v == doctest::Approx(2.0));
    CHECK(bd.p[1].v == doctest::Approx(1.5));
    CHECK(bd.q[0].v == doctest::Approx(4.0 / 3.0));
    CHECK(bd.q[1].v == doctest::Approx(3.0));

    HerzParams dd = dual_params(bd);
    for (int i = 0; i < 2; ++i) {
        CHECK(dd.alpha[i] == doctest::Approx(b.alpha[i]));
        CHECK(dd.p[i].v == doctest::Approx(b.p[i].v));
        CHECK(dd.q[i].v == doctest::Approx(b.q[i].v));
    }
    HerzParams bad = HerzParams::uniform(1, 0.0, Exponent(0.5), Exponent(2.0));
    CHECK_THROWS_AS(dual_params(bad), std::domain_error);
}

TEST_CASE("pairing") {
    StepFunction f = annular_pair_1d();
    CHECK(pairing(f, f).real() == doctest::Approx(3.0));

    Box b1, b2;
    b1.edges = {Interval(Rational(1), Rational(2))};
    b2.edges = {Interval(Rational(2), Rational(3))};
    StepFunction g1 = from_boxes({{b1, Complex(1.0, 0.0)}});
    StepFunction g2 = from_boxes({{b2, Complex(1.0, 0.0)}});
    CHECK(std::abs(pairing(g1, g2)) == 0.0);

    // equality case of the norm-dual bound at matched exponents
    HerzParams p22 = params1(0.0, Exponent(2.0), Exponent(2.0));
    double prod = mixed_herz_norm(f, p22) * mixed_herz_norm(f, dual_params(p22));
    CHECK(pairing(f, f).real() == doctest::Approx(prod).epsilon(1e-12));
}

TEST_CASE("family norms") {
    Rng rng(99);
    CorpusLimits lim;
    StepFunction f = random_step(rng, 1, lim);
    HerzParams params = params1(0.25, Exponent(2.0), Exponent(1.5));

    SequenceField single(f.mesh);
    single.entries.emplace(3, f);
    for (auto r : {Exponent(1.0), Exponent(2.0), Exponent::inf()})
        CHECK(family_norm(single, params, r) ==
              doctest::Approx(mixed_herz_norm(f, params)).epsilon(1e-12));

    SequenceField twice(f.mesh);
    twice.entries.emplace(0, f);
    twice.entries.emplace(1, f);
    CHECK(family_norm(twice, params, Exponent(1.0)) ==
          doctest::Approx(2.0 * mixed_herz_norm(f.map_abs(), params)).epsilon(1e-12));

    // nonincreasing in r
    SequenceField F = random_family(rng, 1, 4, lim);
    double n1 = family_norm(F, params, Exponent(1.0));
    double n2 = family_norm(F, params, Exponent(2.0));
    double ni = family_norm(F, params, Exponent::inf());
    CHECK(n2 <= n1 * (1.0 + 1e-12));
    CHECK(ni <= n2 * (1.0 + 1e-12));
}

TEST_CASE("indicator block closed form") {
    CHECK(indicator_block_norm(1, params1(0.0, Exponent(1.0), Exponent(1.0))) ==
          doctest::Approx(3.0));
    CHECK(indicator_block_norm(1, HerzParams::uniform(2, 0.0, Exponent(1.0), Exponent(1.0))) ==
          doctest::Approx(9.0));
    CHECK(indicator_block_norm(1, params1(1.0, Exponent::inf(), Exponent::inf())) ==
          doctest::Approx(2.0));

    for (int n = 1; n <= 2; ++n)
        for (int m = 1; m <= 3; ++m)
            for (double a : {-0.3, 0.0, 0.7})
                for (auto p : {Exponent(1.0), Exponent(2.0), Exponent::inf()})
                    for (auto q : {Exponent(1.5), Exponent::inf()}) {
                        HerzParams params = HerzParams::uniform(n, a, p, q);
                        double closed = indicator_block_norm(m, params);
                        double engine = mixed_herz_norm(indicator_block(m, n), params);
                        CHECK(closed == doctest::Approx(engine).epsilon(1e-12));
                    }
}

TEST_CASE("admissibility verdicts") {
    auto v1 = admissibility_check(params1(0.0, Exponent(2.0), Exponent(2.0)));
    CHECK(v1.quasi_banach);
    CHECK(v1.banach);
    auto v2 = admissibility_check(params1(-0.5, Exponent(2.0), Exponent(2.0)));
    CHECK_FALSE(v2.quasi_banach);
    auto v3 = admissibility_check(params1(0.9, Exponent(2.0), Exponent(2.0)));
    CHECK(v3.quasi_banach);
    CHECK_FALSE(v3.banach);
}

TEST_CASE("convexification identity") {
    StepFunction f = annular_pair_1d();
    HerzParams p22 = params1(0.0, Exponent(2.0), Exponent(2.0));
    auto [l1, r1] = convexify_norm(f, 1.0, p22);
    CHECK(l1 == doctest::Approx(r1).epsilon(1e-12));
    auto [l2, r2] = convexify_norm(f, 2.0, p22);
    CHECK(l2 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    Rng rng(13);
    CorpusLimits lim;
    for (int t = 0; t < 30; ++t) {
        int n = rng.uniform_int(1, 2);
        StepFunction g = random_step(rng, n, lim);
        HerzParams params;
        for (int i = 0; i < n; ++i) {
            params.alpha.push_back(rng.uniform(-0.8, 0.8));
            params.p.push_back(random_exponent(rng));
            params.q.push_back(random_exponent(rng));
        }
        double rs[3] = {0.5, 2.0, 3.0};
        auto [lhs, rhs] = convexify_norm(g, rs[t % 3], params);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("lattice and convergence properties") {
    Rng rng(29);
    CorpusLimits lim;
    for (int t = 0; t < 15; ++t) {
        int n = rng.uniform_int(1, 2);
        StepFunction f = random_step(rng, n, lim);
        HerzParams params;
        for (int i = 0; i < n; ++i) {
            params.alpha.push_back(rng.uniform(-0.8, 0.8));
            params.p.push_back(random_exponent(rng));
            params.q.push_back(random_exponent(rng));
        }
        // cellwise domination implies norm domination
        StepFunction g(f.mesh);
        for (auto& [k, v] : f.cells) g.cells[k] = v * rng.uniform(0.0, 1.0);
        CHECK(mixed_herz_norm(g, params) <= mixed_herz_norm(f, params) * (1.0 + 1e-12));

        // monotone chain converging to f from below
        double prev = 0.0;
        double full = mixed_herz_norm(f, params);
        for (int m = 1; m <= 4; ++m) {
            double s = 1.0 - std::exp2(-(double)m);
            double cur = mixed_herz_norm(f.map_scale(Complex(s, 0.0)), params);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
        CHECK(prev <= full);
        CHECK(full - prev <= full * 0.1);

        // support shrink: dropping cells drives the norm to zero monotonically
        StepFunction h = f;
        double last = mixed_herz_norm(h, params);
        while (!h.cells.empty()) {
            h.cells.erase(h.cells.begin());
            double cur = mixed_herz_norm(h, params);
            CHECK(cur <= last * (1.0 + 1e-12));
            last = cur;
        }
        CHECK(last == 0.0);

        // positivity
        CHECK(mixed_herz_norm(f, params) > 0.0);
        StepFunction zero(f.mesh);
        CHECK(mixed_herz_norm(zero, params) == 0.0);
    }
}

TEST_CASE("norm-dual pairing bound on random pairs") {
    Rng rng(31);
    CorpusLimits lim;
    for (int t = 0; t < 50; ++t) {
        int n = rng.uniform_int(1, 2);
        StepFunction f = random_step(rng, n, lim);
        StepFunction g = random_step(rng, n, lim);
        HerzParams params;
        for (int i = 0; i < n; ++i) {
            params.alpha.push_back(rng.uniform(-1.0, 1.0));
            params.p.push_back(random_exponent(rng));
            params.q.push_back(random_exponent(rng));
        }
        double lhs = std::abs(pairing(f, g));
        double rhs = mixed_herz_norm(f, params) * mixed_herz_norm(g, dual_params(params));
        CHECK(lhs <= rhs * (1.0 + 1e-9));
    }
}

TEST_CASE("divergence exactly at the admissibility threshold") {
    Rng rng(37);
    for (int t = 0; t < 40; ++t) {
        int n = rng.uniform_int(1, 2);
        std::vector<std::pair<Box, Complex>> pieces;
        Box b;
        for (int i = 0; i < n; ++i)
            b.edges.emplace_back(Rational(0), Rational::pow2(rng.uniform_int(-1, 1)));
        pieces.emplace_back(b, Complex(rng.uniform(0.5, 2.0), 0.0));
        StepFunction f = from_boxes(pieces);
        HerzParams params;
        bool expect = false;
        for (int i = 0; i < n; ++i) {
            Exponent q = random_exponent(rng);
            Exponent p = random_exponent(rng);
            double rq = q.recip();
            double a = rng.uniform(-rq - 0.6, 1.0 - rq);
            if (std::fabs(a + rq) < 0.02) a -= 0.05;
            params.alpha.push_back(a);
            params.p.push_back(p);
            params.q.push_back(q);
            double e = a + rq;
            if (p.is_inf() ? e < 0.0 : e <= 0.0) expect = true;
        }
        CHECK(std::isinf(mixed_herz_norm(f, params)) == expect);
    }
    // sup aggregation is finite exactly at the threshold
    StepFunction f = unit_tail_1d();
    CHECK_FALSE(std::isinf(herz_norm_1d(f, -1.0, Exponent::inf(), Exponent(1.0))));
    CHECK(std::isinf(herz_norm_1d(f, -1.0 - 1e-6, Exponent::inf(), Exponent(1.0))));
    CHECK(std::isinf(herz_norm_1d(f, -1.0, Exponent(1.0), Exponent(1.0))));
}
