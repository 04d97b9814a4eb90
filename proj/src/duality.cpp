#include "herzlab/duality.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace herz {

namespace {

// p and q capped at 1 when infinite (the sup-exponent substitution)
double capped(const Exponent& e) { return e.is_inf() ? 1.0 : e.v; }

struct LevelField {
    StepFunction value;   // iterated norm after this level (one axis fewer)
    StepFunction weight;  // per-cell factor g_j * H_j on the level's own axes
};

// Processes one coordinate of the cascade. `prev` carries the iterated norm
// over the remaining axes; axis 0 is the active coordinate.
LevelField process_level(const StepFunction& prev, double alpha, const Exponent& p,
                         const Exponent& q, double eps, ExtremizerTrace::Level& trace) {
    const double pt = capped(p), qt = capped(q);
    TensorMesh outer;
    outer.axes.assign(prev.mesh.axes.begin() + 1, prev.mesh.axes.end());

    // group cells of the active axis under each outer key
    std::map<CellKey, std::vector<std::pair<int, double>>> groups;
    for (auto& [key, v] : prev.cells) {
        double m = std::abs(v);
        if (m == 0.0) continue;
        CellKey okey(key.begin() + 1, key.end());
        groups[okey].emplace_back(key[0], m);
    }

    LevelField out;
    out.value = StepFunction(outer);
    out.weight = StepFunction(prev.mesh);

    for (auto& [okey, cells] : groups) {
        ExtremizerTrace::OuterRecord rec;
        rec.outer = okey;

        // annulus slice norms of the active coordinate
        std::map<int, double> ann;
        std::map<int, std::vector<std::pair<int, double>>> per_annulus;
        for (auto& [ci, m] : cells) {
            Interval iv = prev.mesh.cell(0, ci);
            int k = annulus_index(iv.midpoint());
            per_annulus[k].emplace_back(ci, m);
            double& slot = ann[k];
            if (q.is_inf()) slot = std::max(slot, m);
            else slot += std::pow(m, q.v) * iv.length().to_double();
        }
        for (auto& [k, s] : ann)
            if (!q.is_inf()) s = std::pow(s, 1.0 / q.v);
        rec.annulus_norms = ann;

        // aggregate to the level value
        double V;
        if (p.is_inf()) {
            V = 0.0;
            for (auto& [k, s] : ann) V = std::max(V, std::exp2(k * alpha) * s);
        } else {
            double t = 0.0;
            for (auto& [k, s] : ann) t += std::exp2(k * p.v * alpha) * std::pow(s, p.v);
            V = std::pow(t, 1.0 / p.v);
        }
        rec.level_value = V;
        if (V <= 0.0) { trace.records.push_back(std::move(rec)); continue; }
        out.value.cells.emplace(okey, Complex(V, 0.0));

        // strict-inequality annulus set
        for (auto& [k, s] : ann)
            if (s > 0.0 && (1.0 + eps) * std::exp2(k * alpha) * s > V) rec.strict_set.push_back(k);

        // counting-measure weights (sup aggregation only)
        std::map<int, double> h;
        if (p.is_inf()) {
            if (!rec.strict_set.empty())
                for (int k : rec.strict_set) h[k] = 1.0 / (double)rec.strict_set.size();
            rec.h_weights = h;
        }

        for (auto& [k, s] : ann) {
            if (s <= 0.0) continue;
            double hk = p.is_inf() ? (h.count(k) ? h[k] : 0.0) : 1.0;
            double Gk = pow0(s, pt - qt) * hk;
            double base = std::exp2(k * pt * alpha) * Gk;
            if (q.is_inf()) {
                // near-sup level set within the annulus
                double measure = 0.0;
                std::set<int> in_set;
                for (auto& [ci, m] : per_annulus[k]) {
                    if ((1.0 + eps) * m > s) {
                        measure += prev.mesh.cell(0, ci).length().to_double();
                        in_set.insert(ci);
                    }
                }
                rec.f_measures[k] = measure;
                if (base == 0.0 || measure <= 0.0) continue;
                for (int ci : in_set) {
                    CellKey full(okey.size() + 1);
                    full[0] = ci;
                    std::copy(okey.begin(), okey.end(), full.begin() + 1);
                    out.weight.cells.emplace(std::move(full), Complex(base / measure, 0.0));
                }
            } else {
                if (base == 0.0) continue;
                // the weight covers the whole annulus of the active axis
                const Axis& axis = prev.mesh.axes[0];
                for (int ci = 0; ci + 1 < (int)axis.size(); ++ci) {
                    Interval iv = prev.mesh.cell(0, ci);
                    if (iv.lo.is_zero() || iv.hi.is_zero() || iv.zero_in_interior()) continue;
                    if (annulus_index(iv.midpoint()) != k) continue;
                    CellKey full(okey.size() + 1);
                    full[0] = ci;
                    std::copy(okey.begin(), okey.end(), full.begin() + 1);
                    out.weight.cells.emplace(std::move(full), Complex(base, 0.0));
                }
            }
        }
        trace.records.push_back(std::move(rec));
    }
    return out;
}

// Suffix products S_j = [E_j]^(qt_{j+1}-pt_j) * (g_j H_j) * S_{j+1}, with the
// scalar top factor [E_n]^(1-pt_n).
StepFunction cascade_product(const std::vector<LevelField>& levels, const HerzParams& params,
                             ExtValue total) {
    int n = params.dim();
    double top = pow0(total, 1.0 - capped(params.p[n - 1]));

    StepFunction cur;  // S_j on axes j..n
    for (int j = n; j >= 1; --j) {
        const LevelField& lf = levels[j - 1];
        StepFunction next(lf.weight.mesh);
        for (auto& [key, w] : lf.weight.cells) {
            double outer_factor;
            if (j == n) {
                outer_factor = top;
            } else {
                CellKey okey(key.begin() + 1, key.end());
                double Ej = 0.0;
                auto it = lf.value.cells.find(okey);
                if (it != lf.value.cells.end()) Ej = it->second.real();
                double Sj1 = cur.at_cell(okey).real();
                outer_factor =
                    pow0(Ej, capped(params.q[j]) - capped(params.p[j - 1])) * Sj1;
            }
            double v = w.real() * outer_factor;
            if (v != 0.0) next.cells.emplace(key, Complex(v, 0.0));
        }
        cur = std::move(next);
    }
    return cur;  // S_1 on the full mesh
}

void validate_extremizer_input(const StepFunction& l, const HerzParams& params) {
    params.validate();
    if (params.dim() != l.dim())
        throw std::invalid_argument("build_extremizer: dimension mismatch");
    if (!params.all_ge_one())
        throw std::domain_error("build_extremizer: exponents must lie in [1, inf]");
    if (l.has_zero_adjacent_support())
        throw std::domain_error("build_extremizer: support must stay away from 0");
}

}  // namespace

std::pair<StepFunction, ExtremizerTrace> build_extremizer(const StepFunction& l,
                                                          const HerzParams& params, double eps) {
    validate_extremizer_input(l, params);
    if (!(eps > 0.0)) throw std::invalid_argument("build_extremizer: eps > 0");

    ExtremizerTrace trace;
    trace.eps = eps;
    trace.params = params;

    int n = l.dim();
    std::vector<LevelField> levels;
    levels.reserve(n);
    StepFunction cur = l.map_abs();
    trace.partial_norms.push_back(cur);
    for (int j = 1; j <= n; ++j) {
        ExtremizerTrace::Level lt;
        lt.level = j;
        if (j < n) {
            LevelField lf = process_level(cur, params.alpha[j - 1], params.p[j - 1],
                                          params.q[j - 1], eps, lt);
            cur = lf.value;
            trace.partial_norms.push_back(cur);
            levels.push_back(std::move(lf));
        } else {
            // top level: a single scalar record; reuse the machinery by
            // treating the remaining 1-D function directly
            LevelField lf = process_level(cur, params.alpha[n - 1], params.p[n - 1],
                                          params.q[n - 1], eps, lt);
            levels.push_back(std::move(lf));
        }
        trace.levels.push_back(std::move(lt));
    }
    ExtValue total = 0.0;
    if (!trace.levels.back().records.empty())
        total = trace.levels.back().records.front().level_value;
    trace.input_norm = total;
    if (!(total > 0.0)) throw std::domain_error("build_extremizer: ||l|| = 0");
    if (std::isinf(total)) throw std::domain_error("build_extremizer: ||l|| = inf");

    StepFunction s1 = cascade_product(levels, params, total);
    trace.weight_product = s1;

    double qt1 = capped(params.q[0]);
    StepFunction ghat(l.mesh);
    for (auto& [key, v] : l.cells) {
        if (v == Complex(0.0, 0.0)) continue;
        double w = pow0(std::abs(v), qt1 - 1.0) * s1.at_cell(key).real();
        Complex g = sgn(std::conj(v)) * w;
        if (g != Complex(0.0, 0.0)) ghat.cells.emplace(key, g);
    }
    return {std::move(ghat), std::move(trace)};
}

SequenceField build_family_extremizer(const SequenceField& l, const HerzParams& params,
                                      const Exponent& r, double eps, ExtremizerTrace* trace_out) {
    params.validate();
    if (!(r.v >= 1.0)) throw std::domain_error("build_family_extremizer: r must lie in [1, inf]");
    if (l.empty()) throw std::domain_error("build_family_extremizer: zero family");

    StepFunction lr = l.ell_r_combine(r);
    // run the scalar cascade on the combined modulus field
    auto [ghat1, trace] = build_extremizer(lr, params, eps);
    (void)ghat1;

    double pt0 = r.is_inf() ? 1.0 : r.v;
    double qt1 = capped(params.q[0]);

    // Lambda_eps per cell: indices within (1+eps) of the cellwise sup
    std::map<CellKey, std::vector<int>> lambda;
    if (r.is_inf()) {
        std::map<CellKey, double> sup;
        for (auto& [j, f] : l.entries)
            for (auto& [key, v] : f.cells) sup[key] = std::max(sup[key], std::abs(v));
        for (auto& [j, f] : l.entries)
            for (auto& [key, v] : f.cells)
                if (std::abs(v) > 0.0 && (1.0 + eps) * std::abs(v) > sup[key])
                    lambda[key].push_back(j);
    }

    SequenceField out(l.mesh);
    for (auto& [j, f] : l.entries) {
        StepFunction gj(l.mesh);
        for (auto& [key, v] : f.cells) {
            if (v == Complex(0.0, 0.0)) continue;
            double g0 = 1.0;
            if (r.is_inf()) {
                auto it = lambda.find(key);
                g0 = 0.0;
                if (it != lambda.end() && !it->second.empty()) {
                    bool member = std::find(it->second.begin(), it->second.end(), j) !=
                                  it->second.end();
                    g0 = member ? 1.0 / (double)it->second.size() : 0.0;
                }
            }
            if (g0 == 0.0) continue;
            double lr_val = std::abs(lr.at_cell(key));
            double w = pow0(std::abs(v), pt0 - 1.0) * pow0(lr_val, qt1 - pt0) *
                       trace.weight_product.at_cell(key).real() * g0;
            Complex g = sgn(std::conj(v)) * w;
            if (g != Complex(0.0, 0.0)) gj.cells.emplace(key, g);
        }
        if (!gj.cells.empty()) out.entries.emplace(j, std::move(gj));
    }
    if (trace_out) *trace_out = std::move(trace);
    return out;
}

std::pair<ExtValue, ExtValue> norm_by_duality(const StepFunction& f, const HerzParams& params,
                                              double eps) {
    ExtValue upper = mixed_herz_norm(f, params);
    if (upper == 0.0) return {0.0, 0.0};
    auto [ghat, trace] = build_extremizer(f, params, eps);
    Complex pr = pairing(f, ghat);
    return {pr.real(), upper};
}

}  // namespace herz
