#ifndef HERZLAB_MAXIMAL_HPP
#define HERZLAB_MAXIMAL_HPP

#include "herzlab/norms.hpp"

namespace herz {

// Midpoint-sampled step approximation of a maximal image. Maximal images are
// not piecewise constant; fields carry the sampling metadata and an analytic
// bound on what the clipped decay region could add to a norm.
struct SampledField {
    StepFunction base;
    int refine = 1;
    double clip_tail_bound = 0.0;
};

// Exact sup of interval averages of |f| along coordinate k through x.
// Optimal endpoints lie in the slice breakpoints plus x itself.
double directional_maximal_at(const StepFunction& f, int k, const std::vector<double>& x);

// Midpoint-sampled field of the directional maximal operator. The acting axis
// is stretched by extend_factor around its hull (decay region), subdivided
// refine times, and re-aligned to the annulus grid.
SampledField directional_maximal_field(const StepFunction& f, int k, int refine,
                                       int extend_factor = 4);

// [M_n ... M_1 (|f|^t)]^(1/t), each stage midpoint-sampled.
SampledField iterated_maximal(const StepFunction& f, double t, int refine);

// lower: scaled centered dyadic cube averages (a genuine lower bound for the
// ball maximal operator at the samples); upper: C(n) times the iterated field.
std::pair<SampledField, SampledField> hl_maximal_bracket(const StepFunction& f, int refine);

struct MaximalOp {
    enum Kind { directional, iterated } kind = iterated;
    int coordinate = 0;  // directional
    double t = 1.0;      // iterated
};

// ||op(f)|| / ||f|| with the image sampled at the given refinement
double boundedness_ratio(const MaximalOp& op, const StepFunction& f, const HerzParams& params,
                         int refine);

// vector-valued ratio ||(sum_j (M f_j)^u)^(1/u)|| / ||(sum_j |f_j|^u)^(1/u)||
double fs_vector_ratio(const SequenceField& F, const HerzParams& params, const Exponent& u,
                       int refine);

// Truncated iteration sum_{k=0..K} M_n^k h / (2^k normM^k) with sampled M_n.
SampledField rubio_francia(const StepFunction& h, int K, double normM, int refine);

// (lhs, rhs) of the dual inequality: integral (Mf)^r phi vs integral |f|^r M(phi)
std::pair<double, double> stein_dual_check(const StepFunction& f, const StepFunction& phi,
                                           double r, int refine);

}  // namespace herz

#endif
