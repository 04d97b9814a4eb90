#include "herzlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace herz {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SliceNorms annulus_norms(const Slice1D& slice, const Exponent& q) {
    SliceNorms out;
    out.inv_q = q.recip();
    const bool qinf = q.is_inf();

    struct Side { bool present = false; int k0 = 0; double mod = 0.0; };
    Side pos, neg;
    std::map<int, double> acc;  // q finite: sum |a|^q len ; q=inf: sup |a|
    int min_regular_k = INT32_MAX;

    for (auto& [iv, m] : slice) {
        if (m == 0.0) continue;
        CellAnnulus ca = classify_cell(iv);
        if (ca.zero_adjacent) {
            Side& s = ca.positive_side ? pos : neg;
            if (s.present) throw std::invalid_argument("annulus_norms: duplicate zero-adjacent cell");
            s.present = true;
            s.k0 = ca.k;
            s.mod = m;
        } else {
            double& slot = acc[ca.k];
            if (qinf) slot = std::max(slot, m);
            else slot += std::pow(m, q.v) * iv.length().to_double();
            min_regular_k = std::min(min_regular_k, ca.k);
        }
    }

    if (pos.present || neg.present) {
        int kt = INT32_MAX;
        if (pos.present) kt = std::min(kt, pos.k0);
        if (neg.present) kt = std::min(kt, neg.k0);
        if (min_regular_k != INT32_MAX) kt = std::min(kt, min_regular_k - 1);
        out.has_tail = true;
        out.k_tail = kt;
        if (qinf) out.tail_T = std::max(pos.present ? pos.mod : 0.0, neg.present ? neg.mod : 0.0);
        else {
            double s = 0.0;
            if (pos.present) s += std::pow(pos.mod, q.v);
            if (neg.present) s += std::pow(neg.mod, q.v);
            out.tail_T = std::pow(s / 2.0, 1.0 / q.v);
        }
        // explicit annuli above the tail receive the one-sided pieces
        int k_hi = std::max(pos.present ? pos.k0 : INT32_MIN, neg.present ? neg.k0 : INT32_MIN);
        for (int k = kt + 1; k <= k_hi; ++k) {
            double piece = 0.0, sup = 0.0;
            if (pos.present && k <= pos.k0) {
                piece += std::pow(pos.mod, qinf ? 1.0 : q.v) * (qinf ? 0.0 : std::exp2(k - 1));
                sup = std::max(sup, pos.mod);
            }
            if (neg.present && k <= neg.k0) {
                piece += std::pow(neg.mod, qinf ? 1.0 : q.v) * (qinf ? 0.0 : std::exp2(k - 1));
                sup = std::max(sup, neg.mod);
            }
            double& slot = acc[k];
            if (qinf) slot = std::max(slot, sup);
            else slot += piece;
        }
    }

    for (auto& [k, v] : acc) {
        double norm = qinf ? v : std::pow(v, 1.0 / q.v);
        if (norm != 0.0) out.by_annulus[k] = norm;
    }
    return out;
}

ExtValue aggregate_annuli(const SliceNorms& norms, double alpha, const Exponent& p) {
    const double e = alpha + norms.inv_q;
    if (p.is_inf()) {
        double best = 0.0;
        for (auto& [k, v] : norms.by_annulus) best = std::max(best, std::exp2(k * alpha) * v);
        if (norms.has_tail && norms.tail_T > 0.0) {
            if (e < 0.0) return kInf;
            double tail = e == 0.0 ? norms.tail_T : norms.tail_T * std::exp2(norms.k_tail * e);
            best = std::max(best, tail);
        }
        return best;
    }
    double total = 0.0;
    for (auto& [k, v] : norms.by_annulus) {
        total += std::exp2(k * p.v * alpha) * std::pow(v, p.v);
        if (std::isinf(total)) return kInf;
    }
    if (norms.has_tail && norms.tail_T > 0.0) {
        if (e <= 0.0) return kInf;
        // sum_{k <= k_tail} rho^k with rho = 2^(p e) > 1
        double rho = std::exp2(p.v * e);
        double series = std::pow(rho, (double)norms.k_tail) * rho / (rho - 1.0);
        total += std::pow(norms.tail_T, p.v) * series;
    }
    return std::pow(total, 1.0 / p.v);
}

namespace {

Slice1D slice_of_1d(const StepFunction& f) {
    Slice1D s;
    for (auto& [key, v] : f.cells) {
        double m = std::abs(v);
        if (m != 0.0) s.emplace_back(f.mesh.cell(0, key[0]), m);
    }
    return s;
}

}  // namespace

ExtValue herz_norm_1d(const StepFunction& f, double alpha, const Exponent& p, const Exponent& q) {
    if (f.dim() != 1) throw std::invalid_argument("herz_norm_1d: expects a 1-D function");
    return aggregate_annuli(annulus_norms(slice_of_1d(f), q), alpha, p);
}

StepFunction reduce_inner(const StepFunction& f, double alpha, const Exponent& p,
                          const Exponent& q, ReduceStats* stats) {
    if (f.dim() < 2) throw std::invalid_argument("reduce_inner: needs n >= 2");
    TensorMesh outer;
    outer.axes.assign(f.mesh.axes.begin() + 1, f.mesh.axes.end());
    // gather inner slices per outer cell
    std::map<CellKey, Slice1D> slices;
    for (auto& [key, v] : f.cells) {
        double m = std::abs(v);
        if (m == 0.0) continue;
        CellKey okey(key.begin() + 1, key.end());
        slices[okey].emplace_back(f.mesh.cell(0, key[0]), m);
    }
    StepFunction out(outer);
    for (auto& [okey, slice] : slices) {
        SliceNorms norms = annulus_norms(slice, q);
        ExtValue v = aggregate_annuli(norms, alpha, p);
        if (stats) {
            if (!norms.by_annulus.empty()) {
                stats->k_min = std::min(stats->k_min, norms.by_annulus.begin()->first);
                stats->k_max = std::max(stats->k_max, norms.by_annulus.rbegin()->first);
            }
            if (norms.has_tail) {
                stats->tail_total += norms.tail_T;
                stats->k_min = std::min(stats->k_min, norms.k_tail);
            }
            stats->diverged = stats->diverged || std::isinf(v);
        }
        if (v != 0.0) out.cells.emplace(okey, Complex(v, 0.0));
    }
    return out;
}

ExtValue NormBreakdown::replay(const HerzParams& params) const {
    if (coordinates.empty()) return value;
    const CoordinateReduction& last = coordinates.back();
    int n = params.dim();
    return herz_norm_1d(last.reduced, params.alpha[n - 1], params.p[n - 1], params.q[n - 1]);
}

ExtValue mixed_herz_norm(const StepFunction& f, const HerzParams& params,
                         NormBreakdown* breakdown) {
    params.validate();
    if (params.dim() != f.dim())
        throw std::invalid_argument("mixed_herz_norm: dimension mismatch");
    StepFunction cur = f;
    int n = f.dim();
    for (int i = 0; i + 1 < n; ++i) {
        ReduceStats stats;
        StepFunction next =
            reduce_inner(cur, params.alpha[i], params.p[i], params.q[i], &stats);
        if (breakdown) {
            CoordinateReduction rec;
            rec.coordinate = i;
            rec.reduced = next;
            if (stats.k_min <= stats.k_max) { rec.k_min = stats.k_min; rec.k_max = stats.k_max; }
            rec.tail_total = stats.tail_total;
            rec.diverged = stats.diverged;
            breakdown->coordinates.push_back(std::move(rec));
        }
        cur = std::move(next);
    }
    Slice1D slice = slice_of_1d(cur);
    SliceNorms norms = annulus_norms(slice, params.q[n - 1]);
    ExtValue v = aggregate_annuli(norms, params.alpha[n - 1], params.p[n - 1]);
    if (breakdown) {
        if (breakdown->coordinates.empty()) {
            CoordinateReduction rec;
            rec.coordinate = n - 1;
            rec.reduced = cur;
            breakdown->coordinates.push_back(std::move(rec));
        }
        auto& rec = breakdown->coordinates.back();
        if (!norms.by_annulus.empty()) {
            rec.k_min = norms.by_annulus.begin()->first;
            rec.k_max = norms.by_annulus.rbegin()->first;
        }
        if (norms.has_tail) rec.tail_total = norms.tail_T;
        rec.diverged = rec.diverged || std::isinf(v);
        breakdown->value = v;
    }
    return v;
}

ExtValue family_norm(const SequenceField& F, const HerzParams& params, const Exponent& r) {
    return mixed_herz_norm(F.ell_r_combine(r), params);
}

ExtValue indicator_block_norm(int m, const HerzParams& params) {
    params.validate();
    if (m < 1) throw std::invalid_argument("indicator_block_norm: m >= 1");
    double product = 1.0;
    for (int i = 0; i < params.dim(); ++i) {
        double e = params.alpha[i] + params.q[i].recip();
        double factor;
        if (params.p[i].is_inf()) {
            factor = std::max(std::exp2((-m + 1) * e), std::exp2(m * e));
        } else {
            double s = 0.0;
            for (int k = -m + 1; k <= m; ++k) s += std::exp2(k * params.p[i].v * e);
            factor = std::pow(s, 1.0 / params.p[i].v);
        }
        product *= factor;
    }
    return product;
}

std::pair<ExtValue, ExtValue> convexify_norm(const StepFunction& f, double r,
                                             const HerzParams& params) {
    if (!(r > 0.0)) throw std::invalid_argument("convexify_norm: r > 0");
    HerzParams scaled;
    for (int i = 0; i < params.dim(); ++i) {
        scaled.alpha.push_back(r * params.alpha[i]);
        scaled.p.push_back(params.p[i].is_inf() ? Exponent::inf() : Exponent(params.p[i].v / r));
        scaled.q.push_back(params.q[i].is_inf() ? Exponent::inf() : Exponent(params.q[i].v / r));
    }
    StepFunction power = f.map_abs().map_power(Complex(r, 0.0));
    ExtValue lhs = std::pow(mixed_herz_norm(power, scaled), 1.0 / r);
    ExtValue rhs = mixed_herz_norm(f, params);
    return {lhs, rhs};
}

}  // namespace herz
