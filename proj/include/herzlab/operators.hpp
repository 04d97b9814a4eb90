#ifndef HERZLAB_OPERATORS_HPP
#define HERZLAB_OPERATORS_HPP

#include "herzlab/sequence_field.hpp"

namespace herz {

// Linear operators from step functions to sequence fields of step functions.
// dyadic_average(i, k) replaces the value by its mean over the dyadic block of
// width 2^i containing the k-th coordinate, one output index per scale; it is
// linear, keeps step functions, and is dominated pointwise by the directional
// maximal operator.
struct LinearOperatorSpec {
    enum Kind { identity, zero, dyadic_average, cell_matrix };
    Kind kind = identity;

    std::vector<int> scales;  // dyadic_average: output indices
    int coordinate = 0;       // dyadic_average: acting coordinate

    struct MatrixEntry {
        int out_index;
        CellKey out_cell;
        Complex weight;
    };
    TensorMesh matrix_mesh;  // cell_matrix: output mesh
    std::map<CellKey, std::vector<MatrixEntry>> matrix;

    static LinearOperatorSpec make_identity() { return {}; }
    static LinearOperatorSpec make_zero() {
        LinearOperatorSpec s; s.kind = zero; return s;
    }
    static LinearOperatorSpec make_dyadic(std::vector<int> scales, int coordinate) {
        LinearOperatorSpec s;
        s.kind = dyadic_average;
        s.scales = std::move(scales);
        s.coordinate = coordinate;
        return s;
    }
};

SequenceField apply_operator(const LinearOperatorSpec& op, const StepFunction& f);

// Same operator with absolute coefficient weights, applied to |f|; dominates
// the modulus of apply_operator cellwise. Used to certify boundary bounds.
SequenceField apply_operator_abs(const LinearOperatorSpec& op, const StepFunction& f);

}  // namespace herz

#endif
