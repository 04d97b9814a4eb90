#ifndef HERZLAB_NORMS_HPP
#define HERZLAB_NORMS_HPP

#include "herzlab/exponent.hpp"
#include "herzlab/sequence_field.hpp"
#include "herzlab/step_function.hpp"

namespace herz {

// norm values; +inf encodes divergence
using ExtValue = double;

// One-dimensional slice of moduli: (interval, |coefficient|).
using Slice1D = std::vector<std::pair<Interval, double>>;

// Per-annulus L^q norms of a slice. Cells touching 0 produce a geometric
// tail: for k <= k_tail the slice norm equals tail_T * 2^(k/q).
struct SliceNorms {
    std::map<int, double> by_annulus;
    bool has_tail = false;
    int k_tail = 0;
    double tail_T = 0.0;
    double inv_q = 0.0;
};

SliceNorms annulus_norms(const Slice1D& slice, const Exponent& q);

// Weighted l^p aggregation over annuli (sum or sup); +inf when the tail
// diverges, i.e. alpha + 1/q <= 0 for finite p, < 0 for p = inf.
ExtValue aggregate_annuli(const SliceNorms& norms, double alpha, const Exponent& p);

ExtValue herz_norm_1d(const StepFunction& f, double alpha, const Exponent& p, const Exponent& q);

struct ReduceStats {
    int k_min = INT32_MAX, k_max = INT32_MIN;
    double tail_total = 0.0;
    bool diverged = false;
};

// One step of the iterated norm: eliminates the innermost coordinate.
// Output coefficients are nonnegative (or +inf markers).
StepFunction reduce_inner(const StepFunction& f, double alpha, const Exponent& p,
                          const Exponent& q, ReduceStats* stats = nullptr);

struct CoordinateReduction {
    int coordinate = 0;
    int k_min = 0, k_max = 0;       // annulus range seen across all slices
    double tail_total = 0.0;        // summed tail contributions (diagnostic)
    bool diverged = false;
    StepFunction reduced;           // function remaining after this coordinate
};

struct NormBreakdown {
    std::vector<CoordinateReduction> coordinates;
    ExtValue value = 0.0;
    // recompute the norm from the recorded intermediates
    ExtValue replay(const HerzParams& params) const;
};

ExtValue mixed_herz_norm(const StepFunction& f, const HerzParams& params,
                         NormBreakdown* breakdown = nullptr);

// ||(sum_j |f(j,.)|^r)^(1/r)|| in the mixed Herz norm
ExtValue family_norm(const SequenceField& F, const HerzParams& params, const Exponent& r);

// Closed-form norm of the indicator of A_m = I_m^n (n = params dimension).
ExtValue indicator_block_norm(int m, const HerzParams& params);

// Both sides of the convexification identity:
// || |f|^r ||^(1/r) with parameters (r alpha, p/r, q/r)  vs  ||f|| with params.
std::pair<ExtValue, ExtValue> convexify_norm(const StepFunction& f, double r,
                                             const HerzParams& params);

}  // namespace herz

#endif
