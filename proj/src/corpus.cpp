#include "herzlab/corpus.hpp"

#include <algorithm>
#include <cmath>

namespace herz {

std::uint64_t Rng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

int Rng::uniform_int(int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    std::uint64_t span = (std::uint64_t)(hi - lo) + 1;
    return lo + (int)(next() % span);
}

double Rng::uniform(double lo, double hi) {
    double u = (double)(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

Interval random_interval(Rng& rng, int m, bool negative) {
    // dyadic grid of step 2^-m between 2^-m and 2^m
    std::int64_t steps = (std::int64_t)1 << (2 * m);  // count of grid steps in [2^-m, 2^m]
    std::int64_t a = rng.uniform_int(1, (int)std::min<std::int64_t>(steps, 1 << 16) - 1);
    std::int64_t b = rng.uniform_int(1, (int)std::min<std::int64_t>(steps, 1 << 16));
    if (a == b) ++b;
    if (a > b) std::swap(a, b);
    Rational unit = Rational::pow2(-m);
    Rational lo = Rational(a) * unit, hi = Rational(b) * unit;
    if (negative) return Interval(-hi, -lo);
    return Interval(lo, hi);
}

namespace {
Complex random_coeff(Rng& rng, bool complex_coeffs, bool nonneg) {
    if (nonneg) return Complex(rng.uniform(0.125, 8.0), 0.0);
    double re = rng.uniform(-8.0, 8.0);
    double im = complex_coeffs ? rng.uniform(-8.0, 8.0) : 0.0;
    if (std::fabs(re) < 0.125 && std::fabs(im) < 0.125) re = re < 0 ? -0.5 : 0.5;
    return Complex(re, im);
}
}  // namespace

StepFunction random_step(Rng& rng, int n, const CorpusLimits& lim, bool complex_coeffs,
                         bool nonneg) {
    int m = rng.uniform_int(1, lim.max_m);
    int pieces = rng.uniform_int(1, std::max(1, lim.max_pieces / n));
    std::vector<std::pair<Box, Complex>> boxes;
    for (int t = 0; t < pieces; ++t) {
        Box b;
        for (int i = 0; i < n; ++i) b.edges.push_back(random_interval(rng, m, rng.coin()));
        boxes.emplace_back(b, random_coeff(rng, complex_coeffs, nonneg));
        StepFunction trial = from_boxes(boxes);
        if ((int)trial.cells.size() > lim.max_cells && boxes.size() > 1) {
            boxes.pop_back();
            break;
        }
    }
    return from_boxes(boxes);
}

StepFunction random_tail_step(Rng& rng, int n, const CorpusLimits& lim) {
    std::vector<std::pair<Box, Complex>> boxes;
    Box tail;
    for (int i = 0; i < n; ++i) {
        int k0 = rng.uniform_int(-2, 2);
        Rational outer = Rational::pow2(k0);
        if (rng.coin()) tail.edges.emplace_back(Rational(0), outer);
        else tail.edges.emplace_back(-outer, Rational(0));
    }
    boxes.emplace_back(tail, random_coeff(rng, false, true));
    int extra = rng.uniform_int(0, 2);
    for (int t = 0; t < extra; ++t) {
        Box b;
        for (int i = 0; i < n; ++i) b.edges.push_back(random_interval(rng, lim.max_m, rng.coin()));
        boxes.emplace_back(b, random_coeff(rng, false, true));
    }
    return from_boxes(boxes);
}

SequenceField random_family(Rng& rng, int n, int entries, const CorpusLimits& lim,
                            bool complex_coeffs) {
    std::map<int, StepFunction> fam;
    int base = rng.uniform_int(-2, 2);
    for (int t = 0; t < entries; ++t)
        fam.emplace(base + t, random_step(rng, n, lim, complex_coeffs));
    return make_shared_mesh(fam);
}

Exponent random_exponent(Rng& rng, bool allow_one, bool allow_inf) {
    for (;;) {
        int pick = rng.uniform_int(0, 4);
        if (pick == 0) {
            if (!allow_one) continue;
            return Exponent(1.0);
        }
        if (pick == 4) {
            if (!allow_inf) continue;
            return Exponent::inf();
        }
        if (pick == 1) return Exponent(1.5);
        if (pick == 2) return Exponent(2.0);
        return Exponent(3.0);
    }
}

HerzParams random_admissible_params(Rng& rng, int n, bool allow_one, bool allow_inf) {
    HerzParams out;
    for (int i = 0; i < n; ++i) {
        Exponent q = random_exponent(rng, allow_one, allow_inf);
        Exponent p = random_exponent(rng, allow_one, allow_inf);
        double rq = q.recip();
        // stay strictly inside the admissible window
        double alpha = rng.uniform(-rq + 0.05, 1.0 - rq - 0.05);
        out.alpha.push_back(alpha);
        out.p.push_back(p);
        out.q.push_back(q);
    }
    return out;
}

SequenceField random_full_block_family(Rng& rng, int n, int m, bool complex_coeffs) {
    StepFunction block = indicator_block(m, n);
    std::map<int, StepFunction> fam;
    for (int j = -(m - 1); j <= m - 1; ++j) {
        StepFunction f(block.mesh);
        for (auto& [key, v] : block.cells) {
            double mag = rng.uniform(0.25, 8.0);
            double ph = complex_coeffs ? rng.uniform(0.0, 6.283185307179586) : 0.0;
            f.cells.emplace(key, Complex(mag * std::cos(ph), mag * std::sin(ph)));
        }
        fam.emplace(j, std::move(f));
    }
    return make_shared_mesh(fam);
}

InterpPath random_path(Rng& rng, int n, double theta, bool equal_sides) {
    InterpPath path;
    path.theta = theta;
    auto draw = [&](HerzParams& P) {
        for (int i = 0; i < n; ++i) {
            P.alpha.push_back(rng.uniform(-0.75, 0.75));
            P.p.push_back(random_exponent(rng));
            P.q.push_back(random_exponent(rng));
        }
    };
    draw(path.psi_side0);
    draw(path.psi_side1);
    if (equal_sides) {
        path.family_side0 = path.psi_side0;
        path.family_side1 = path.psi_side1;
    } else {
        draw(path.family_side0);
        draw(path.family_side1);
    }
    return path;
}

}  // namespace herz
