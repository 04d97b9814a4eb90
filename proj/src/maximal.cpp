#include "herzlab/maximal.hpp"

#include <algorithm>
#include <cmath>

namespace herz {

namespace {

// 1-D slice with prefix masses, supporting exact sup of interval averages.
struct SliceMax {
    std::vector<double> bp;      // breakpoints
    std::vector<double> prefix;  // prefix(i) = integral of |f| over (-inf, bp[i])
    std::vector<double> val;     // modulus per cell, val[i] on [bp[i], bp[i+1])

    void build(const std::vector<std::pair<Interval, double>>& cells) {
        // cells must be disjoint and sorted; gaps carry value 0
        bp.clear(); prefix.clear(); val.clear();
        if (cells.empty()) return;
        for (auto& [iv, m] : cells) {
            double lo = iv.lo.to_double(), hi = iv.hi.to_double();
            if (bp.empty()) { bp.push_back(lo); val.push_back(m); bp.push_back(hi); }
            else if (lo == bp.back()) { val.push_back(m); bp.push_back(hi); }
            else { val.push_back(0.0); bp.push_back(lo); val.push_back(m); bp.push_back(hi); }
        }
        prefix.assign(bp.size(), 0.0);
        for (size_t i = 1; i < bp.size(); ++i)
            prefix[i] = prefix[i - 1] + val[i - 1] * (bp[i] - bp[i - 1]);
    }

    bool empty() const { return bp.empty(); }
    double total_mass() const { return empty() ? 0.0 : prefix.back(); }

    double mass_below(double t) const {
        if (t <= bp.front()) return 0.0;
        if (t >= bp.back()) return prefix.back();
        auto it = std::upper_bound(bp.begin(), bp.end(), t);
        size_t i = (size_t)(it - bp.begin()) - 1;
        return prefix[i] + val[i] * (t - bp[i]);
    }

    double value_at(double x) const {
        if (empty() || x < bp.front() || x >= bp.back()) return 0.0;
        auto it = std::upper_bound(bp.begin(), bp.end(), x);
        return val[(size_t)(it - bp.begin()) - 1];
    }

    // sup over intervals [a,b] containing x of (1/(b-a)) integral |f|
    double maximal(double x) const {
        if (empty()) return 0.0;
        double best = value_at(x);  // intervals shrinking to x
        std::vector<double> lefts, rights;
        for (double b : bp) {
            if (b <= x) lefts.push_back(b);
            if (b >= x) rights.push_back(b);
        }
        lefts.push_back(x);
        rights.push_back(x);
        for (double a : lefts) {
            double ma = mass_below(a);
            for (double b : rights) {
                if (!(b > a)) continue;
                double avg = (mass_below(b) - ma) / (b - a);
                best = std::max(best, avg);
            }
        }
        return best;
    }
};

std::vector<std::pair<Interval, double>> axis_slice(const StepFunction& f, int k,
                                                    const CellKey& others) {
    // others: full key with slot k ignored
    std::vector<std::pair<Interval, double>> out;
    CellKey key = others;
    for (int c = 0; c < f.mesh.cell_count(k); ++c) {
        key[k] = c;
        double m = std::abs(f.at_cell(key));
        if (m != 0.0) out.emplace_back(f.mesh.cell(k, c), m);
    }
    return out;
}

Axis extended_axis(const Axis& a, int extend_factor, int refine) {
    std::vector<Rational> pts(a.begin(), a.end());
    if (extend_factor > 1 && a.size() >= 2) {
        Rational w = a.back() - a.front();
        Rational pad = Rational(extend_factor - 1, 2) * w;
        pts.push_back(a.front() - pad);
        pts.push_back(a.back() + pad);
    }
    Axis norm = normalize_axis(std::move(pts));
    if (refine <= 1) return norm;
    std::vector<Rational> fine;
    for (size_t i = 0; i + 1 < norm.size(); ++i) {
        Rational step = (norm[i + 1] - norm[i]) / Rational(refine);
        for (int s = 0; s < refine; ++s) fine.push_back(norm[i] + step * Rational(s));
    }
    fine.push_back(norm.back());
    return normalize_axis(std::move(fine));
}

}  // namespace

double directional_maximal_at(const StepFunction& f, int k, const std::vector<double>& x) {
    if (k < 0 || k >= f.dim()) throw std::invalid_argument("directional_maximal_at: bad axis");
    CellKey key(f.dim(), 0);
    for (int i = 0; i < f.dim(); ++i) {
        if (i == k) continue;
        const Axis& a = f.mesh.axes[i];
        double v = x[i];
        if (v < a.front().to_double() || v >= a.back().to_double()) return 0.0;
        int lo = 0, hi = (int)a.size() - 1;
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            if (a[mid].to_double() <= v) lo = mid;
            else hi = mid;
        }
        key[i] = lo;
    }
    SliceMax sm;
    sm.build(axis_slice(f, k, key));
    return sm.maximal(x[k]);
}

SampledField directional_maximal_field(const StepFunction& f, int k, int refine,
                                       int extend_factor) {
    if (k < 0 || k >= f.dim()) throw std::invalid_argument("directional_maximal_field: bad axis");
    if (refine < 1) throw std::invalid_argument("directional_maximal_field: refine >= 1");
    TensorMesh mesh = f.mesh;
    mesh.axes[k] = extended_axis(f.mesh.axes[k], extend_factor, refine);

    // midpoints of the sampled axis
    std::vector<double> mids(mesh.cell_count(k));
    for (int c = 0; c < mesh.cell_count(k); ++c)
        mids[c] = mesh.cell(k, c).midpoint().to_double();

    SampledField out;
    out.refine = refine;
    out.base = StepFunction(mesh);

    // iterate over rows: cells of all other axes (of the input mesh)
    TensorMesh rows;
    for (int i = 0; i < f.dim(); ++i)
        if (i != k) rows.axes.push_back(f.mesh.axes[i]);

    double max_row_mass = 0.0;
    CellIter iter(rows);
    iter.for_each([&](const CellKey& rkey) {
        CellKey fkey(f.dim(), 0);
        for (int i = 0, r = 0; i < f.dim(); ++i)
            if (i != k) fkey[i] = rkey[r++];
        SliceMax sm;
        sm.build(axis_slice(f, k, fkey));
        if (sm.empty()) return;
        max_row_mass = std::max(max_row_mass, sm.total_mass());
        CellKey okey = fkey;
        for (int c = 0; c < mesh.cell_count(k); ++c) {
            double v = sm.maximal(mids[c]);
            if (v == 0.0) continue;
            okey[k] = c;
            out.base.cells.emplace(okey, Complex(v, 0.0));
        }
    });

    // what the clipped decay region can still contribute pointwise
    if (extend_factor > 1 && f.mesh.axes[k].size() >= 2) {
        double w = (f.mesh.axes[k].back() - f.mesh.axes[k].front()).to_double();
        double pad = 0.5 * (extend_factor - 1) * w;
        out.clip_tail_bound = pad > 0.0 ? max_row_mass / pad : 0.0;
    }
    return out;
}

SampledField iterated_maximal(const StepFunction& f, double t, int refine) {
    if (!(t > 0.0)) throw std::invalid_argument("iterated_maximal: t > 0");
    StepFunction g = f.map_abs();
    if (t != 1.0) g = g.map_power(Complex(t, 0.0));
    SampledField stage;
    stage.base = std::move(g);
    stage.refine = refine;
    double clip = 0.0;
    for (int k = 0; k < f.dim(); ++k) {
        stage = directional_maximal_field(stage.base, k, refine);
        clip = std::max(clip, stage.clip_tail_bound);
    }
    if (t != 1.0) stage.base = stage.base.map_power(Complex(1.0 / t, 0.0));
    stage.clip_tail_bound = clip;
    return stage;
}

namespace {

double box_average(const StepFunction& f, const std::vector<double>& center, double h) {
    // average of |f| over the cube prod [c_i - h, c_i + h]
    double mass = 0.0;
    for (auto& [key, v] : f.cells) {
        double m = std::abs(v);
        if (m == 0.0) continue;
        double inter = 1.0;
        for (int i = 0; i < f.dim(); ++i) {
            Interval c = f.mesh.cell(i, key[i]);
            double lo = std::max(c.lo.to_double(), center[i] - h);
            double hi = std::min(c.hi.to_double(), center[i] + h);
            if (hi <= lo) { inter = 0.0; break; }
            inter *= hi - lo;
        }
        mass += m * inter;
    }
    double vol = std::pow(2.0 * h, (double)f.dim());
    return mass / vol;
}

double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
        default: {
            double v = 1.0;
            for (int k = 1; k <= n; ++k) v *= 2.0 * M_PI / k;  // rough, n <= 3 in practice
            return v;
        }
    }
}

}  // namespace

std::pair<SampledField, SampledField> hl_maximal_bracket(const StepFunction& f, int refine) {
    int n = f.dim();
    SampledField upper = iterated_maximal(f, 1.0, refine);
    double cball = std::exp2((double)n) / unit_ball_volume(n);
    upper.base = upper.base.map_scale(Complex(cball, 0.0));

    // cube of half-side s fits in the ball of radius s sqrt(n)
    double clower = std::pow(2.0 / std::sqrt((double)n), (double)n) / unit_ball_volume(n);

    // dyadic scales spanning the cell widths up to the extended hull
    double wmin = 1e300, wmax = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < upper.base.mesh.cell_count(i); ++c)
            wmin = std::min(wmin, upper.base.mesh.cell(i, c).length().to_double());
        wmax = std::max(wmax, (upper.base.mesh.axes[i].back() -
                               upper.base.mesh.axes[i].front()).to_double());
    }
    int j_lo = (int)std::floor(std::log2(std::max(wmin, 1e-12))) - 1;
    int j_hi = (int)std::ceil(std::log2(std::max(wmax, 1e-12))) + 1;

    SampledField lower;
    lower.refine = refine;
    lower.base = StepFunction(upper.base.mesh);
    if (!f.is_zero()) {
        std::vector<double> mid(n);
        CellIter iter(upper.base.mesh);
        iter.for_each([&](const CellKey& key) {
            for (int i = 0; i < n; ++i)
                mid[i] = upper.base.mesh.cell(i, key[i]).midpoint().to_double();
            double best = 0.0;
            for (int j = j_lo; j <= j_hi; ++j)
                best = std::max(best, box_average(f, mid, std::exp2(j)));
            double v = clower * best;
            if (v != 0.0) lower.base.cells.emplace(key, Complex(v, 0.0));
        });
    }
    return {std::move(lower), std::move(upper)};
}

double boundedness_ratio(const MaximalOp& op, const StepFunction& f, const HerzParams& params,
                         int refine) {
    ExtValue denom = mixed_herz_norm(f, params);
    if (denom == 0.0) throw std::domain_error("boundedness_ratio: ||f|| = 0");
    if (std::isinf(denom))
        throw std::domain_error("boundedness_ratio: ||f|| = inf (inadmissible input)");
    SampledField img = op.kind == MaximalOp::directional
                           ? directional_maximal_field(f, op.coordinate, refine)
                           : iterated_maximal(f, op.t, refine);
    return mixed_herz_norm(img.base, params) / denom;
}

double fs_vector_ratio(const SequenceField& F, const HerzParams& params, const Exponent& u,
                       int refine) {
    if (u.is_inf() || !(u.v > 1.0))
        throw std::domain_error("fs_vector_ratio: u must lie in (1, inf)");
    if (F.entries.empty()) throw std::domain_error("fs_vector_ratio: empty family");
    ExtValue denom = family_norm(F, params, u);
    if (denom == 0.0) throw std::domain_error("fs_vector_ratio: zero family");
    if (std::isinf(denom)) throw std::domain_error("fs_vector_ratio: divergent family norm");
    std::map<int, StepFunction> images;
    for (auto& [j, f] : F.entries) images.emplace(j, iterated_maximal(f, 1.0, refine).base);
    SequenceField M = make_shared_mesh(images);
    return family_norm(M, params, u) / denom;
}

SampledField rubio_francia(const StepFunction& h, int K, double normM, int refine) {
    if (K < 0) throw std::invalid_argument("rubio_francia: K >= 0");
    if (!(normM > 0.0)) throw std::invalid_argument("rubio_francia: normM > 0");
    int n = h.dim();
    SampledField out;
    out.refine = refine;
    if (K == 0) { out.base = h; return out; }
    // first application extends and refines; later ones stay on that mesh
    SampledField stage = directional_maximal_field(h, n - 1, refine);
    StepFunction acc = step_combine(h.reexpressed(stage.base.mesh),
                                    stage.base.map_scale(Complex(1.0 / (2.0 * normM), 0.0)),
                                    CombineOp::add);
    double scale = 1.0 / (2.0 * normM);
    for (int k = 2; k <= K; ++k) {
        stage = directional_maximal_field(stage.base, n - 1, 1, 1);
        scale /= 2.0 * normM;
        acc = step_combine(acc, stage.base.map_scale(Complex(scale, 0.0)), CombineOp::add);
    }
    out.base = std::move(acc);
    out.clip_tail_bound = stage.clip_tail_bound;
    return out;
}

std::pair<double, double> stein_dual_check(const StepFunction& f, const StepFunction& phi,
                                           double r, int refine) {
    if (!(r > 1.0) || std::isinf(r))
        throw std::domain_error("stein_dual_check: r must lie in (1, inf)");
    StepFunction Mf = iterated_maximal(f, 1.0, refine).base;
    StepFunction Mphi = iterated_maximal(phi, 1.0, refine).base;
    double lhs = pairing(Mf.map_power(Complex(r, 0.0)), phi.map_abs()).real();
    double rhs = pairing(f.map_abs().map_power(Complex(r, 0.0)), Mphi).real();
    return {lhs, rhs};
}

}  // namespace herz
