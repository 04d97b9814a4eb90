#include "herzlab/operators.hpp"

#include <cmath>

namespace herz {

namespace {

// conditional expectation onto dyadic blocks of width 2^i along one axis
StepFunction dyadic_block_average(const StepFunction& f, int scale, int k) {
    const Axis& axis = f.mesh.axes[k];
    Rational width = Rational::pow2(scale);
    // block index range covering the hull
    auto block_of = [&](const Rational& x) {
        // floor(x / width)
        Rational q = x / width;
        std::int64_t fl = q.num >= 0 ? q.num / q.den : -(((-q.num) + q.den - 1) / q.den);
        return fl;
    };
    std::int64_t b_lo = block_of(axis.front());
    std::int64_t b_hi = block_of(axis.back());
    if (Rational(b_hi) * width == axis.back()) --b_hi;

    std::vector<Rational> pts;
    for (std::int64_t b = b_lo; b <= b_hi + 1; ++b) pts.push_back(Rational(b) * width);
    TensorMesh mesh = f.mesh;
    mesh.axes[k] = normalize_axis(std::move(pts));

    StepFunction out(mesh);
    std::map<CellKey, Complex> sums;  // key in output mesh, accumulated mass
    for (auto& [key, v] : f.cells) {
        if (v == Complex(0.0, 0.0)) continue;
        Interval c = f.mesh.cell(k, key[k]);
        // a source cell may span several blocks
        std::int64_t first = block_of(c.lo);
        std::int64_t last = block_of(c.hi);
        if (Rational(last) * width == c.hi) --last;
        for (std::int64_t b = first; b <= last; ++b) {
            Rational lo = std::max(c.lo, Rational(b) * width);
            Rational hi = std::min(c.hi, Rational(b + 1) * width);
            if (!(lo < hi)) continue;
            int oc = mesh.locate(k, lo);
            if (oc < 0) continue;
            CellKey okey = key;
            okey[k] = oc;
            sums[okey] += v * (hi - lo).to_double();
        }
    }
    double w = width.to_double();
    for (auto& [okey, s] : sums) {
        Complex v = s / w;
        if (v != Complex(0.0, 0.0)) out.cells.emplace(okey, v);
    }
    return out;
}

SequenceField apply_impl(const LinearOperatorSpec& op, const StepFunction& f, bool abs_mode) {
    StepFunction input = abs_mode ? f.map_abs() : f;
    switch (op.kind) {
        case LinearOperatorSpec::identity: {
            SequenceField out(input.mesh);
            out.entries.emplace(0, input);
            return out;
        }
        case LinearOperatorSpec::zero:
            return SequenceField(input.mesh);
        case LinearOperatorSpec::dyadic_average: {
            std::map<int, StepFunction> entries;
            for (int i : op.scales)
                entries.emplace(i, dyadic_block_average(input, i, op.coordinate));
            if (entries.empty()) return SequenceField(input.mesh);
            return make_shared_mesh(entries);
        }
        case LinearOperatorSpec::cell_matrix: {
            std::map<int, StepFunction> entries;
            for (auto& [in_cell, rows] : op.matrix) {
                Complex v = input.at_cell(in_cell);
                if (v == Complex(0.0, 0.0)) continue;
                for (auto& e : rows) {
                    Complex w = abs_mode ? Complex(std::abs(e.weight), 0.0) : e.weight;
                    auto [it, fresh] = entries.try_emplace(e.out_index,
                                                           StepFunction(op.matrix_mesh));
                    it->second.cells[e.out_cell] += v * w;
                }
            }
            if (entries.empty()) return SequenceField(op.matrix_mesh);
            for (auto& [j, g] : entries) g.drop_zero_cells();
            return make_shared_mesh(entries);
        }
    }
    throw std::logic_error("apply_operator: unknown kind");
}

}  // namespace

SequenceField apply_operator(const LinearOperatorSpec& op, const StepFunction& f) {
    return apply_impl(op, f, false);
}

SequenceField apply_operator_abs(const LinearOperatorSpec& op, const StepFunction& f) {
    return apply_impl(op, f, true);
}

}  // namespace herz
