#ifndef HERZLAB_MESH_HPP
#define HERZLAB_MESH_HPP

#include <optional>
#include <vector>

#include "herzlab/rational.hpp"

namespace herz {

// Half-open interval [lo, hi).
struct Interval {
    Rational lo, hi;
    Interval() = default;
    Interval(Rational l, Rational h) : lo(l), hi(h) {
        if (!(lo < hi)) throw std::invalid_argument("Interval: requires lo < hi");
    }
    Rational length() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / Rational(2); }
    bool contains(const Rational& x) const { return lo <= x && x < hi; }
    // 0 may only appear as an endpoint
    bool zero_in_interior() const { return lo < Rational(0) && Rational(0) < hi; }
};

// Axis-parallel parallelepiped; no edge may contain 0 in its interior.
struct Box {
    std::vector<Interval> edges;
    int dim() const { return (int)edges.size(); }
    void validate() const;
};

// The dyadic annulus index of x != 0: the unique k with 2^(k-1) <= |x| < 2^k.
int annulus_index(const Rational& x);
int annulus_index(double x);

using Axis = std::vector<Rational>;  // strictly increasing breakpoints

// Sorts, dedupes, inserts 0 when the hull straddles it, inserts every power
// of two between the smallest and largest breakpoint magnitudes on each side,
// and aligns cells touching 0 so their outer endpoint is a power of two.
// Afterwards every bounded cell away from 0 lies inside a single annulus.
Axis normalize_axis(std::vector<Rational> points);

// True if x is exactly +/- 2^k; k returned when so.
std::optional<int> dyadic_log2(const Rational& x);

struct TensorMesh {
    std::vector<Axis> axes;

    int dim() const { return (int)axes.size(); }
    int cell_count(int axis) const { return (int)axes[axis].size() - 1; }
    Interval cell(int axis, int i) const { return Interval(axes[axis][i], axes[axis][i + 1]); }
    // index of the cell containing x, or -1 if outside the hull
    int locate(int axis, const Rational& x) const;

    friend bool operator==(const TensorMesh& a, const TensorMesh& b) { return a.axes == b.axes; }
};

// Mesh whose cells tile every input box exactly (plus annulus alignment).
TensorMesh tensor_refine(const std::vector<Box>& boxes);

// Union of breakpoints per axis, re-normalized.
TensorMesh common_refine(const TensorMesh& a, const TensorMesh& b);

// Classification of a 1-D cell against the annulus structure.
struct CellAnnulus {
    bool zero_adjacent = false;  // [0, 2^k0) or [-2^k0, 0)
    int k = 0;                   // annulus index, or k0 for zero-adjacent cells
    bool positive_side = true;
};
CellAnnulus classify_cell(const Interval& c);

}  // namespace herz

#endif
