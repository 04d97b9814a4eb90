#include "herzlab/interpolation.hpp"

#include <algorithm>
#include <cmath>

namespace herz {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;

Complex cpow2(Complex w) { return std::exp(w * kLn2); }  // 2^w

// interpolated exponent from the reciprocal value (0 means infinity)
Exponent from_recip(double r) {
    if (r == 0.0) return Exponent::inf();
    return Exponent(1.0 / r);
}
}  // namespace

void InterpPath::validate() const {
    psi_side0.validate();
    psi_side1.validate();
    family_side0.validate();
    family_side1.validate();
    int n = psi_side0.dim();
    if (psi_side1.dim() != n || family_side0.dim() != n || family_side1.dim() != n)
        throw std::invalid_argument("InterpPath: endpoint dimensions differ");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("InterpPath: theta must lie in [0,1]");
    if (!psi_side0.all_ge_one() || !psi_side1.all_ge_one() || !family_side0.all_ge_one() ||
        !family_side1.all_ge_one())
        throw std::domain_error("InterpPath: endpoint exponents must lie in [1, inf]");
}

HerzParams InterpPath::psi_at_theta() const {
    HerzParams out;
    for (int k = 0; k < dim(); ++k) {
        out.alpha.push_back((1 - theta) * psi_side0.alpha[k] + theta * psi_side1.alpha[k]);
        out.p.push_back(from_recip((1 - theta) * psi_side0.p[k].recip() +
                                   theta * psi_side1.p[k].recip()));
        out.q.push_back(from_recip((1 - theta) * psi_side0.q[k].recip() +
                                   theta * psi_side1.q[k].recip()));
    }
    return out;
}

HerzParams InterpPath::family_at_theta() const {
    HerzParams out;
    for (int k = 0; k < dim(); ++k) {
        out.alpha.push_back((1 - theta) * family_side0.alpha[k] + theta * family_side1.alpha[k]);
        out.p.push_back(from_recip((1 - theta) * family_side0.p[k].recip() +
                                   theta * family_side1.p[k].recip()));
        out.q.push_back(from_recip((1 - theta) * family_side0.q[k].recip() +
                                   theta * family_side1.q[k].recip()));
    }
    return out;
}

HerzParams InterpPath::family_dual_at_theta() const { return dual_params(family_at_theta()); }

PathCoefficients path_exponents(const InterpPath& path, Complex z) {
    path.validate();
    PathCoefficients out;
    int n = path.dim();
    Complex one(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
        Complex az = (one - z) * path.family_side0.alpha[k] + z * path.family_side1.alpha[k];
        Complex bz = (one - z) * path.psi_side0.alpha[k] + z * path.psi_side1.alpha[k];
        Complex xz = (one - z) * path.family_side0.p[k].recip() +
                     z * path.family_side1.p[k].recip();
        Complex ez = (one - z) * path.family_side0.q[k].recip() +
                     z * path.family_side1.q[k].recip();
        Complex lz = (one - z) * path.psi_side0.p[k].recip() + z * path.psi_side1.p[k].recip();
        Complex mz = (one - z) * path.psi_side0.q[k].recip() + z * path.psi_side1.q[k].recip();
        out.alpha_z.push_back(az);
        out.beta_z.push_back(bz);
        out.xi_z.push_back(xz);
        out.eta_z.push_back(ez);
        out.lambda_z.push_back(lz);
        out.mu_z.push_back(mz);

        double th = path.theta;
        double xt = (1 - th) * path.family_side0.p[k].recip() + th * path.family_side1.p[k].recip();
        double et = (1 - th) * path.family_side0.q[k].recip() + th * path.family_side1.q[k].recip();
        double lt = (1 - th) * path.psi_side0.p[k].recip() + th * path.psi_side1.p[k].recip();
        double mt = (1 - th) * path.psi_side0.q[k].recip() + th * path.psi_side1.q[k].recip();
        out.alpha_theta.push_back((1 - th) * path.family_side0.alpha[k] +
                                  th * path.family_side1.alpha[k]);
        out.beta_theta.push_back((1 - th) * path.psi_side0.alpha[k] +
                                 th * path.psi_side1.alpha[k]);
        out.xi_theta.push_back(xt);
        out.eta_theta.push_back(et);
        out.lambda_theta.push_back(lt);
        out.mu_theta.push_back(mt);

        out.mu_tilde.push_back(mt == 0.0 ? one : mz / mt);
        out.lambda_tilde.push_back(lt == 0.0 ? one : lz / lt);
        out.eta_tilde.push_back(et == 1.0 ? one : (one - ez) / (1.0 - et));
        out.xi_tilde.push_back(xt == 1.0 ? one : (one - xz) / (1.0 - xt));
    }
    return out;
}

namespace {

// Per-coordinate analysis of the successive inner reductions: annulus slice
// norms keyed by outer cell, and the reduced function.
struct LevelData {
    std::map<CellKey, std::map<int, double>> ann;
    StepFunction value;
};

LevelData analyze_level(const StepFunction& prev, double alpha, const Exponent& p,
                        const Exponent& q) {
    LevelData out;
    TensorMesh outer;
    outer.axes.assign(prev.mesh.axes.begin() + 1, prev.mesh.axes.end());
    out.value = StepFunction(outer);

    std::map<CellKey, std::vector<std::pair<int, double>>> groups;
    for (auto& [key, v] : prev.cells) {
        double m = std::abs(v);
        if (m == 0.0) continue;
        CellKey okey(key.begin() + 1, key.end());
        groups[okey].emplace_back(key[0], m);
    }
    for (auto& [okey, cells] : groups) {
        std::map<int, double>& ann = out.ann[okey];
        for (auto& [ci, m] : cells) {
            Interval iv = prev.mesh.cell(0, ci);
            int k = annulus_index(iv.midpoint());
            double& slot = ann[k];
            if (q.is_inf()) slot = std::max(slot, m);
            else slot += std::pow(m, q.v) * iv.length().to_double();
        }
        for (auto& [k, s] : ann)
            if (!q.is_inf()) s = std::pow(s, 1.0 / q.v);
        double V;
        if (p.is_inf()) {
            V = 0.0;
            for (auto& [k, s] : ann) V = std::max(V, std::exp2(k * alpha) * s);
        } else {
            double t = 0.0;
            for (auto& [k, s] : ann) t += std::exp2(k * p.v * alpha) * std::pow(s, p.v);
            V = std::pow(t, 1.0 / p.v);
        }
        if (V != 0.0) out.value.cells.emplace(okey, Complex(V, 0.0));
    }
    return out;
}

// Shared cascade evaluation for both families. `weights[k]` multiplies the
// annulus-norm factor at level k+1; `bridge[k]` is the exponent on the
// intermediate reduced value after level k+1.
struct CascadeSpec {
    const HerzParams* theta_params;             // per-level (alpha, p, q)
    std::vector<Complex> ann_exponent;          // exponent on the annulus slice norm
    std::vector<Complex> weight_exponent_coef;  // factor w_k: 2^(i * coef_k) per level
    std::vector<Complex> bridge_exponent;       // exponent on the reduced value, levels 1..n-1
};

// evaluates the product of annulus-weight and bridge factors at cell `key`
Complex cascade_factor(const std::vector<LevelData>& levels, const TensorMesh& mesh,
                       const CascadeSpec& spec, const CellKey& key) {
    int n = (int)key.size();
    Complex val(1.0, 0.0);
    for (int k = 1; k <= n; ++k) {
        CellKey outer(key.begin() + k, key.end());
        Interval iv = mesh.cell(k - 1, key[k - 1]);
        int i_k = annulus_index(iv.midpoint());
        const auto& ann_map = levels[k - 1].ann;
        auto it = ann_map.find(outer);
        double A = 0.0;
        if (it != ann_map.end()) {
            auto jt = it->second.find(i_k);
            if (jt != it->second.end()) A = jt->second;
        }
        val *= cpow2(Complex((double)i_k, 0.0) * spec.weight_exponent_coef[k - 1]);
        val *= pow0c(A, spec.ann_exponent[k - 1]);
        if (val == Complex(0.0, 0.0)) return val;
        if (k < n) {
            // levels[k-1].value is the reduction after level k, keyed by outer
            auto vt = levels[k - 1].value.cells.find(outer);
            double V = vt == levels[k - 1].value.cells.end() ? 0.0 : vt->second.real();
            val *= pow0c(V, spec.bridge_exponent[k - 1]);
            if (val == Complex(0.0, 0.0)) return val;
        }
    }
    return val;
}

std::vector<LevelData> run_levels(const StepFunction& base, const HerzParams& params) {
    std::vector<LevelData> levels;
    StepFunction cur = base;
    int n = base.dim();
    for (int k = 0; k < n; ++k) {
        LevelData ld = analyze_level(cur, params.alpha[k], params.p[k], params.q[k]);
        cur = ld.value;
        levels.push_back(std::move(ld));
    }
    return levels;
}

}  // namespace

StepFunction build_F(const StepFunction& psi, const InterpPath& path, Complex z) {
    path.validate();
    if (psi.dim() != path.dim()) throw std::invalid_argument("build_F: dimension mismatch");
    if (psi.has_zero_adjacent_support())
        throw std::domain_error("build_F: support must stay away from 0");

    PathCoefficients pc = path_exponents(path, z);
    HerzParams ptheta = path.psi_at_theta();
    std::vector<LevelData> levels = run_levels(psi.map_abs(), ptheta);

    int n = psi.dim();
    CascadeSpec spec;
    spec.theta_params = &ptheta;
    for (int k = 0; k < n; ++k) {
        spec.ann_exponent.push_back(pc.lambda_tilde[k] - pc.mu_tilde[k]);
        // 2^{-i beta_k(z) + i beta_k lambda~_k(z)}
        spec.weight_exponent_coef.push_back(-pc.beta_z[k] +
                                            pc.beta_theta[k] * pc.lambda_tilde[k]);
        if (k + 1 < n) spec.bridge_exponent.push_back(pc.mu_tilde[k + 1] - pc.lambda_tilde[k]);
    }

    StepFunction out(psi.mesh);
    for (auto& [key, v] : psi.cells) {
        if (v == Complex(0.0, 0.0)) continue;
        Complex val = pow0c(std::abs(v), pc.mu_tilde[0]) * sgn(v);
        if (val == Complex(0.0, 0.0)) continue;
        val *= cascade_factor(levels, psi.mesh, spec, key);
        if (val != Complex(0.0, 0.0)) out.cells.emplace(key, val);
    }
    return out;
}

SequenceField build_G(const SequenceField& phi, const InterpPath& path, Complex z) {
    path.validate();
    if (phi.dim() != path.dim()) throw std::invalid_argument("build_G: dimension mismatch");

    PathCoefficients pc = path_exponents(path, z);
    HerzParams dtheta = path.family_dual_at_theta();

    StepFunction varphi = phi.ell_r_combine(Exponent(1.0));
    if (varphi.has_zero_adjacent_support())
        throw std::domain_error("build_G: support must stay away from 0");
    std::vector<LevelData> levels = run_levels(varphi, dtheta);

    int n = phi.dim();
    CascadeSpec spec;
    spec.theta_params = &dtheta;
    for (int k = 0; k < n; ++k) {
        spec.ann_exponent.push_back(pc.xi_tilde[k] - pc.eta_tilde[k]);
        // 2^{+i alpha_k(z) - i alpha_k xi~_k(z)}
        spec.weight_exponent_coef.push_back(pc.alpha_z[k] -
                                            pc.alpha_theta[k] * pc.xi_tilde[k]);
        // bridge uses eta~_{k+1} - xi~_k on the reduced dual norms
        if (k + 1 < n) spec.bridge_exponent.push_back(pc.eta_tilde[k + 1] - pc.xi_tilde[k]);
    }
    // the k = 0 pointwise factor: |varphi|^(eta~_1(z) - 1)
    Complex zero_exponent = pc.eta_tilde[0] - Complex(1.0, 0.0);

    SequenceField out(phi.mesh);
    for (auto& [j, f] : phi.entries) {
        StepFunction gj(phi.mesh);
        for (auto& [key, v] : f.cells) {
            if (v == Complex(0.0, 0.0)) continue;
            double vp = std::abs(varphi.at_cell(key));
            Complex val = std::abs(v) * sgn(v) * pow0c(vp, zero_exponent);
            if (val == Complex(0.0, 0.0)) continue;
            val *= cascade_factor(levels, phi.mesh, spec, key);
            if (val != Complex(0.0, 0.0)) gj.cells.emplace(key, val);
        }
        if (!gj.cells.empty()) out.entries.emplace(j, std::move(gj));
    }
    return out;
}

Complex phi_pairing(const LinearOperatorSpec& T, const StepFunction& psi,
                    const SequenceField& phi, const InterpPath& path, Complex z) {
    StepFunction Fz = build_F(psi, path, z);
    SequenceField TF = apply_operator(T, Fz);
    SequenceField Gz = build_G(phi, path, z);
    Complex total(0.0, 0.0);
    for (auto& [j, g] : Gz.entries) {
        const StepFunction* tf = TF.entry(j);
        if (!tf) continue;
        total += pairing(*tf, g);
    }
    return total;
}

double BoundaryReport::max_rel_error() const {
    auto rel = [](double a, double b) {
        double s = std::max({std::fabs(a), std::fabs(b), 1e-300});
        return std::fabs(a - b) / s;
    };
    return std::max({rel(f_line0_lhs, f_line0_rhs), rel(f_line1_lhs, f_line1_rhs),
                     rel(g_line0_lhs, g_line0_rhs), rel(g_line1_lhs, g_line1_rhs)});
}

BoundaryReport boundary_identities(const StepFunction& psi, const SequenceField& phi,
                                   const InterpPath& path, double h) {
    BoundaryReport rep;
    int n = path.dim();
    HerzParams psi_theta = path.psi_at_theta();
    HerzParams fam_dual_theta = path.family_dual_at_theta();

    double psi_norm = mixed_herz_norm(psi, psi_theta);
    double phi_norm = family_norm(phi, fam_dual_theta, Exponent(1.0));

    PathCoefficients at0 = path_exponents(path, Complex(0.0, 0.0));
    PathCoefficients at1 = path_exponents(path, Complex(1.0, 0.0));

    StepFunction F0 = build_F(psi, path, Complex(0.0, h));
    StepFunction F1 = build_F(psi, path, Complex(1.0, h));
    rep.f_line0_lhs = mixed_herz_norm(F0, path.psi_side0);
    rep.f_line0_rhs = pow0(psi_norm, at0.lambda_tilde[n - 1].real());
    rep.f_line1_lhs = mixed_herz_norm(F1, path.psi_side1);
    rep.f_line1_rhs = pow0(psi_norm, at1.lambda_tilde[n - 1].real());

    SequenceField G0 = build_G(phi, path, Complex(0.0, h));
    SequenceField G1 = build_G(phi, path, Complex(1.0, h));
    rep.g_line0_lhs = family_norm(G0, dual_params(path.family_side0), Exponent(1.0));
    rep.g_line0_rhs = pow0(phi_norm, at0.xi_tilde[n - 1].real());
    rep.g_line1_lhs = family_norm(G1, dual_params(path.family_side1), Exponent(1.0));
    rep.g_line1_rhs = pow0(phi_norm, at1.xi_tilde[n - 1].real());
    return rep;
}

namespace {

// scales the pair so that ||psi|| = 1 and the family dual l^1 norm is 1
std::pair<StepFunction, SequenceField> normalize_pair(const StepFunction& psi,
                                                      const SequenceField& phi,
                                                      const InterpPath& path) {
    double pn = mixed_herz_norm(psi, path.psi_at_theta());
    double fn = family_norm(phi, path.family_dual_at_theta(), Exponent(1.0));
    if (!(pn > 0.0) || !(fn > 0.0))
        throw std::domain_error("three_lines: corpus pair with zero norm");
    StepFunction ps = psi.map_scale(Complex(1.0 / pn, 0.0));
    SequenceField ph(phi.mesh);
    for (auto& [j, f] : phi.entries)
        ph.entries.emplace(j, f.map_scale(Complex(1.0 / fn, 0.0)));
    return {std::move(ps), std::move(ph)};
}

}  // namespace

ThreeLinesReport three_lines_verify(
    const LinearOperatorSpec& T, const InterpPath& path, double M0, double M1,
    const std::vector<std::pair<StepFunction, SequenceField>>& corpus) {
    ThreeLinesReport rep;
    rep.m0 = M0;
    rep.m1 = M1;
    double bound = std::pow(M0, 1.0 - path.theta) * std::pow(M1, path.theta);
    for (auto& [psi, phi] : corpus) {
        auto [ps, ph] = normalize_pair(psi, phi, path);
        Complex v = phi_pairing(T, ps, ph, path, Complex(path.theta, 0.0));
        double a = std::abs(v);
        rep.phi_abs.push_back(a);
        double ratio = bound > 0.0 ? a / bound : (a > 0.0 ? HUGE_VAL : 0.0);
        rep.ratios.push_back(ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    return rep;
}

std::pair<double, double> certified_line_bounds(
    const LinearOperatorSpec& T, const InterpPath& path,
    const std::vector<std::pair<StepFunction, SequenceField>>& corpus) {
    double m0 = 0.0, m1 = 0.0;
    for (auto& [psi, phi] : corpus) {
        auto [ps, ph] = normalize_pair(psi, phi, path);
        (void)ph;
        StepFunction F0 = build_F(ps, path, Complex(0.0, 0.0));
        StepFunction F1 = build_F(ps, path, Complex(1.0, 0.0));
        SequenceField A0 = apply_operator_abs(T, F0);
        SequenceField A1 = apply_operator_abs(T, F1);
        m0 = std::max(m0, family_norm(A0, path.family_side0, Exponent::inf()));
        m1 = std::max(m1, family_norm(A1, path.family_side1, Exponent::inf()));
    }
    return {m0, m1};
}

}  // namespace herz
