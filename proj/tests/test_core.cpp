#include <doctest.h>

#include "herzlab/corpus.hpp"
#include "herzlab/step_function.hpp"

using namespace herz;

namespace {
StepFunction box1d(double lo, double hi, Complex v) {
    Box b;
    b.edges.emplace_back(Rational::parse(std::to_string(lo)), Rational::parse(std::to_string(hi)));
    return from_boxes({{b, v}});
}
}  // namespace

TEST_CASE("conjugate exponent conventions") {
    CHECK(conjugate_exponent(Exponent(1.0)).is_inf());
    CHECK(conjugate_exponent(Exponent(2.0)).v == doctest::Approx(2.0));
    CHECK(conjugate_exponent(Exponent::inf()).v == doctest::Approx(1.0));
    CHECK(conjugate_exponent(Exponent(1.5)).v == doctest::Approx(3.0));
    CHECK_THROWS_AS(conjugate_exponent(Exponent(0.5)), std::domain_error);
}

TEST_CASE("annulus index") {
    CHECK(annulus_index(Rational(1)) == 1);
    CHECK(annulus_index(Rational(3, 4)) == 0);
    CHECK(annulus_index(Rational(-3)) == 2);
    CHECK_THROWS_AS(annulus_index(Rational(0)), std::domain_error);
    // the annuli partition the nonzero reals
    for (int k = -6; k <= 6; ++k) {
        Rational lo = Rational::pow2(k - 1);
        Rational mid = (Rational::pow2(k - 1) + Rational::pow2(k)) / Rational(2);
        CHECK(annulus_index(lo) == k);
        CHECK(annulus_index(mid) == k);
        CHECK(annulus_index(-mid) == k);
    }
}

TEST_CASE("tensor refine inserts dyadic points and reproduces boxes") {
    SUBCASE("two overlapping squares") {
        Box b1, b2;
        b1.edges = {Interval(Rational(0), Rational(2)), Interval(Rational(0), Rational(2))};
        b2.edges = {Interval(Rational(1), Rational(3)), Interval(Rational(1), Rational(3))};
        TensorMesh mesh = tensor_refine({b1, b2});
        Axis expect = {Rational(0), Rational(1), Rational(2), Rational(3)};
        CHECK(mesh.axes[0] == expect);
        CHECK(mesh.axes[1] == expect);
        // union covers exactly 7 unit cells
        double area = 0.0;
        CellIter iter(mesh);
        iter.for_each([&](const CellKey& key) {
            Rational mx = mesh.cell(0, key[0]).midpoint();
            Rational my = mesh.cell(1, key[1]).midpoint();
            auto inside = [&](const Box& b) {
                return b.edges[0].contains(mx) && b.edges[1].contains(my);
            };
            if (inside(b1) || inside(b2))
                area += mesh.cell(0, key[0]).length().to_double() *
                        mesh.cell(1, key[1]).length().to_double();
        });
        CHECK(area == doctest::Approx(7.0).epsilon(1e-12));
    }
    SUBCASE("single aligned box stays one cell") {
        Box b;
        b.edges = {Interval(Rational(1), Rational(2))};
        TensorMesh mesh = tensor_refine({b});
        CHECK(mesh.axes[0].size() == 2);
    }
    SUBCASE("in-hull powers of two are inserted") {
        Box b;
        b.edges = {Interval(Rational(1, 2), Rational(3))};
        TensorMesh mesh = tensor_refine({b});
        Axis expect = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
        CHECK(mesh.axes[0] == expect);
    }
    SUBCASE("random boxes tile exactly") {
        Rng rng(191);
        for (int t = 0; t < 40; ++t) {
            int n = rng.uniform_int(1, 3);
            std::vector<Box> boxes;
            int count = rng.uniform_int(1, 4);
            for (int c = 0; c < count; ++c) {
                Box b;
                for (int i = 0; i < n; ++i) b.edges.push_back(random_interval(rng, 3, rng.coin()));
                boxes.push_back(b);
            }
            TensorMesh mesh = tensor_refine(boxes);
            for (auto& b : boxes) {
                double vol = 1.0, covered = 0.0;
                for (auto& e : b.edges) vol *= e.length().to_double();
                CellIter iter(mesh);
                iter.for_each([&](const CellKey& key) {
                    double v = 1.0;
                    for (int i = 0; i < n; ++i) {
                        Interval c = mesh.cell(i, key[i]);
                        if (!b.edges[i].contains(c.midpoint())) { v = 0.0; break; }
                        v *= c.length().to_double();
                    }
                    covered += v;
                });
                CHECK(covered == doctest::Approx(vol).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("cell classification rejects misaligned zero-adjacent cells") {
    CHECK(classify_cell(Interval(Rational(0), Rational(4))).zero_adjacent);
    CHECK(classify_cell(Interval(Rational(0), Rational(4))).k == 2);
    CHECK(classify_cell(Interval(Rational(-1), Rational(0))).k == 0);
    CHECK_THROWS(classify_cell(Interval(Rational(0), Rational(3))));
    CHECK_THROWS(classify_cell(Interval(Rational(-1), Rational(1))));
}

TEST_CASE("pointwise transforms") {
    StepFunction f = box1d(0, 1, Complex(-2.0, 0.0));
    CHECK(f.map_abs().eval(std::vector<double>{0.5}).real() == doctest::Approx(2.0));

    CHECK(pow0c(0.0, Complex(0.0, 0.0)) == Complex(0.0, 0.0));  // 0^0 := 0 here
    StepFunction z = box1d(0, 1, Complex(0.0, 0.0));
    CHECK(z.map_power(Complex(0.0, 0.0)).eval(std::vector<double>{0.5}) == Complex(0.0, 0.0));

    StepFunction g = box1d(1, 2, Complex(3.0, 4.0));
    Complex s = g.map_sgn_conj().eval(std::vector<double>{1.5});
    CHECK(s.real() == doctest::Approx(0.6));
    CHECK(s.imag() == doctest::Approx(-0.8));

    // power(1) is the identity on nonnegative functions
    Rng rng(7);
    CorpusLimits lim;
    StepFunction h = random_step(rng, 2, lim, false, true);
    CHECK(max_cell_difference(h.map_power(Complex(1.0, 0.0)), h) <= 1e-15);
}

TEST_CASE("combine on the common refinement") {
    StepFunction a = box1d(0, 1, Complex(1.0, 0.0));
    StepFunction sum = step_combine(a, a, CombineOp::add);
    CHECK(sum.eval(std::vector<double>{0.5}).real() == doctest::Approx(2.0));

    StepFunction b = box1d(0, 2, Complex(1.0, 0.0));
    StepFunction c = box1d(1, 3, Complex(1.0, 0.0));
    StepFunction prod = step_combine(b, c, CombineOp::multiply);
    CHECK(prod.eval(std::vector<double>{1.5}).real() == doctest::Approx(1.0));
    CHECK(prod.eval(std::vector<double>{0.5}) == Complex(0.0, 0.0));
    CHECK(prod.eval(std::vector<double>{2.5}) == Complex(0.0, 0.0));

    StepFunction zero(b.mesh);
    CHECK(max_cell_difference(step_combine(b, zero, CombineOp::add), b) == 0.0);

    Rng rng(1);
    CorpusLimits lim;
    CHECK_THROWS(step_combine(b, random_step(rng, 2, lim), CombineOp::add));
}

TEST_CASE("combine is commutative and associative") {
    Rng rng(23);
    CorpusLimits lim;
    for (int t = 0; t < 20; ++t) {
        int n = rng.uniform_int(1, 2);
        StepFunction f = random_step(rng, n, lim);
        StepFunction g = random_step(rng, n, lim);
        StepFunction h = random_step(rng, n, lim);
        CHECK(max_cell_difference(step_combine(f, g, CombineOp::add),
                                  step_combine(g, f, CombineOp::add)) <= 1e-12);
        StepFunction l = step_combine(step_combine(f, g, CombineOp::add), h, CombineOp::add);
        StepFunction r = step_combine(f, step_combine(g, h, CombineOp::add), CombineOp::add);
        CHECK(max_cell_difference(l, r) <= 1e-12);
    }
}

TEST_CASE("rational parsing and printing") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-0.25") == Rational(-1, 4));
    CHECK(Rational::parse("2") == Rational(2));
    CHECK(Rational(6, 8).str() == "3/4");
    CHECK(Rational::pow2(-3) == Rational(1, 8));
}
