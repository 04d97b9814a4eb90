#include "herzlab/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace herz {

void Box::validate() const {
    if (edges.empty()) throw std::invalid_argument("Box: needs at least one edge");
    for (auto& e : edges)
        if (e.zero_in_interior())
            throw std::invalid_argument("Box: an edge contains 0 in its interior");
}

int annulus_index(const Rational& x) {
    if (x.is_zero()) throw std::domain_error("annulus_index: x = 0");
    Rational a = x.abs();
    // find k with 2^(k-1) <= a < 2^k
    int k = 0;
    if (a >= Rational(1)) {
        while (a >= Rational::pow2(k)) ++k;
    } else {
        while (a < Rational::pow2(k - 1)) --k;
    }
    return k;
}

int annulus_index(double x) {
    if (x == 0.0) throw std::domain_error("annulus_index: x = 0");
    double a = std::fabs(x);
    int k = (int)std::ceil(std::log2(a));
    // log2 can land on either side at powers of two; fix up exactly
    while (std::exp2(k - 1) > a) --k;
    while (a >= std::exp2(k)) ++k;
    return k;
}

std::optional<int> dyadic_log2(const Rational& x) {
    if (x.is_zero()) return std::nullopt;
    Rational a = x.abs();
    // power of two iff numerator and denominator are powers of two
    auto is_p2 = [](std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; };
    if (!is_p2(a.num) || !is_p2(a.den)) return std::nullopt;
    int k = 0;
    for (std::int64_t n = a.num; n > 1; n >>= 1) ++k;
    for (std::int64_t d = a.den; d > 1; d >>= 1) --k;
    return k;
}

namespace {

// Inserts powers of two into the positive-magnitude range (lo_mag, hi_mag)
// and, when align_floor, the largest power of two strictly below lo_mag.
void insert_dyadics(std::vector<Rational>& out, const Rational& lo_mag, const Rational& hi_mag,
                    bool align_floor, bool negative_side) {
    auto push = [&](const Rational& m) { out.push_back(negative_side ? -m : m); };
    if (align_floor && !dyadic_log2(lo_mag).has_value()) {
        int k = annulus_index(lo_mag);  // 2^(k-1) <= lo_mag < 2^k
        push(Rational::pow2(k - 1));
    }
    if (!(lo_mag < hi_mag)) return;
    int k_lo = annulus_index(lo_mag);
    int k_hi = annulus_index(hi_mag);
    for (int k = k_lo - 1; k <= k_hi; ++k) {
        if (k < -62 || k > 62) continue;
        Rational p = Rational::pow2(k);
        if (lo_mag < p && p < hi_mag) push(p);
    }
}

}  // namespace

Axis normalize_axis(std::vector<Rational> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 2) return points;

    std::vector<Rational> extra;
    if (points.front() < Rational(0) && Rational(0) < points.back()) {
        bool has_zero = std::binary_search(points.begin(), points.end(), Rational(0));
        if (!has_zero) extra.push_back(Rational(0));
    }
    // positive side
    {
        Rational lo, hi;
        bool found = false;
        for (auto& x : points)
            if (x.is_positive()) {
                if (!found) { lo = x; found = true; }
                hi = x;
            }
        if (found) {
            bool zero_adjacent = points.front() <= Rational(0);
            insert_dyadics(extra, lo, hi, zero_adjacent, false);
        }
    }
    // negative side (work with magnitudes)
    {
        Rational lo, hi;
        bool found = false;
        for (auto& x : points)
            if (x.is_negative()) {
                Rational m = x.abs();
                if (!found) { lo = m; hi = m; found = true; }
                else { lo = std::min(lo, m); hi = std::max(hi, m); }
            }
        if (found) {
            bool zero_adjacent = points.back() >= Rational(0);
            insert_dyadics(extra, lo, hi, zero_adjacent, true);
        }
    }
    std::vector<Rational> fresh;
    for (auto& x : extra)
        if (!std::binary_search(points.begin(), points.end(), x)) fresh.push_back(x);
    if (!fresh.empty()) {
        points.insert(points.end(), fresh.begin(), fresh.end());
        return normalize_axis(std::move(points));
    }
    return points;
}

int TensorMesh::locate(int axis, const Rational& x) const {
    const Axis& a = axes[axis];
    if (a.size() < 2 || x < a.front() || !(x < a.back())) return -1;
    auto it = std::upper_bound(a.begin(), a.end(), x);
    return (int)(it - a.begin()) - 1;
}

TensorMesh tensor_refine(const std::vector<Box>& boxes) {
    if (boxes.empty()) throw std::invalid_argument("tensor_refine: no boxes");
    int n = boxes.front().dim();
    for (auto& b : boxes) {
        b.validate();
        if (b.dim() != n) throw std::invalid_argument("tensor_refine: dimension mismatch");
    }
    TensorMesh mesh;
    mesh.axes.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Rational> pts;
        for (auto& b : boxes) {
            pts.push_back(b.edges[i].lo);
            pts.push_back(b.edges[i].hi);
        }
        mesh.axes[i] = normalize_axis(std::move(pts));
    }
    return mesh;
}

TensorMesh common_refine(const TensorMesh& a, const TensorMesh& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("common_refine: dimension mismatch");
    TensorMesh mesh;
    mesh.axes.resize(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        std::vector<Rational> pts = a.axes[i];
        pts.insert(pts.end(), b.axes[i].begin(), b.axes[i].end());
        mesh.axes[i] = normalize_axis(std::move(pts));
    }
    return mesh;
}

CellAnnulus classify_cell(const Interval& c) {
    CellAnnulus out;
    if (c.zero_in_interior())
        throw std::invalid_argument("classify_cell: cell straddles 0");
    if (c.lo.is_zero()) {
        auto k = dyadic_log2(c.hi);
        if (!k) throw std::invalid_argument("classify_cell: zero-adjacent cell not aligned");
        out.zero_adjacent = true;
        out.k = *k;
        out.positive_side = true;
        return out;
    }
    if (c.hi.is_zero()) {
        auto k = dyadic_log2(c.lo);
        if (!k) throw std::invalid_argument("classify_cell: zero-adjacent cell not aligned");
        out.zero_adjacent = true;
        out.k = *k;
        out.positive_side = false;
        return out;
    }
    out.zero_adjacent = false;
    out.positive_side = c.lo.is_positive();
    out.k = annulus_index(c.midpoint());
    return out;
}

}  // namespace herz
