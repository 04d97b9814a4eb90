#ifndef HERZLAB_DUALITY_HPP
#define HERZLAB_DUALITY_HPP

#include "herzlab/norms.hpp"

namespace herz {

// Audit trail of the dual near-extremizer cascade. Every recorded quantity is
// reproducible from the input function and epsilon alone.
struct ExtremizerTrace {
    struct OuterRecord {
        CellKey outer;                        // cell key in the coordinates after this level
        std::map<int, double> annulus_norms;  // weighted slice norms per annulus
        double level_value = 0.0;             // iterated norm at this outer cell
        std::vector<int> strict_set;          // annuli within (1+eps) of the aggregate
        std::map<int, double> h_weights;      // counting-measure weights (sup-exponent levels)
        std::map<int, double> f_measures;     // Lebesgue measure of near-sup level sets
    };
    struct Level {
        int level = 0;  // 1-based coordinate
        std::vector<OuterRecord> records;
    };

    double eps = 0.0;
    HerzParams params;
    ExtValue input_norm = 0.0;
    std::vector<Level> levels;
    std::vector<StepFunction> partial_norms;  // successive inner reductions of |l|
    StepFunction weight_product;              // cascade product before the pointwise factors
};

// Builds the unit-dual-norm test function paired against l:
// ||g||_dual = 1 and Re <l, g> >= (1+eps)^(-2n) ||l||.
// Requires p,q in [1,inf]^n, ||l|| > 0, and support away from 0.
std::pair<StepFunction, ExtremizerTrace> build_extremizer(const StepFunction& l,
                                                          const HerzParams& params, double eps);

// l^r variant: returns the dual family with ||out||_(dual, r') = 1 and
// sum_j <l_j, out_j> >= (1+eps)^(-2n-1) * family_norm(l).
SequenceField build_family_extremizer(const SequenceField& l, const HerzParams& params,
                                      const Exponent& r, double eps,
                                      ExtremizerTrace* trace = nullptr);

// (lower, upper) bracket of ||f||: upper from the norm engine, lower from the
// pairing against the constructed dual function.
std::pair<ExtValue, ExtValue> norm_by_duality(const StepFunction& f, const HerzParams& params,
                                              double eps);

}  // namespace herz

#endif
