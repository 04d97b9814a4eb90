#ifndef HERZLAB_STEP_FUNCTION_HPP
#define HERZLAB_STEP_FUNCTION_HPP

#include <complex>
#include <iosfwd>
#include <map>
#include <vector>

#include "herzlab/mesh.hpp"

namespace herz {

using Complex = std::complex<double>;
using CellKey = std::vector<int>;

// z/|z| with sgn 0 := 0
Complex sgn(Complex z);

// a^w := exp(w ln a) for a > 0, and 0^w := 0 (also for w = 0).
double pow0(double base, double expo);
Complex pow0c(double base, Complex expo);

// Piecewise constant function with bounded support on an annulus-aligned
// tensor mesh. Unlisted cells are 0. Cells touching 0 are permitted; norms
// treat them through closed-form geometric tails.
struct StepFunction {
    TensorMesh mesh;
    std::map<CellKey, Complex> cells;

    int dim() const { return mesh.dim(); }

    StepFunction() = default;
    explicit StepFunction(TensorMesh m) : mesh(std::move(m)) {}

    void set(const CellKey& key, Complex v);
    Complex at_cell(const CellKey& key) const;
    // pointwise value; 0 outside the hull
    Complex eval(const std::vector<Rational>& x) const;
    Complex eval(const std::vector<double>& x) const;

    bool is_zero() const;
    double max_abs() const;
    // true if some nonzero cell touches 0 in some coordinate
    bool has_zero_adjacent_support() const;
    void drop_zero_cells(double tol = 0.0);

    // same values, expressed on a refinement of the current mesh
    StepFunction reexpressed(const TensorMesh& finer) const;

    StepFunction map_abs() const;
    StepFunction map_power(Complex gamma) const;  // |coeff|^gamma with 0^gamma := 0
    StepFunction map_sgn_conj() const;            // sgn(conj coeff)
    StepFunction map_scale(Complex c) const;
};

enum class CombineOp { add, multiply, max_abs };
StepFunction step_combine(const StepFunction& f, const StepFunction& g, CombineOp op);

// exact integral of f*g over R^n (no conjugation)
Complex pairing(const StepFunction& f, const StepFunction& g);

// integral of f over R^n
Complex integral(const StepFunction& f);

// max over common-refinement cells of |f - g|
double max_cell_difference(const StepFunction& f, const StepFunction& g);

// cellwise |g| <= |f| (1+tol) on the common refinement
bool dominated_by(const StepFunction& g, const StepFunction& f, double tol = 0.0);

// builds a step function from boxes with constant values (boxes may overlap;
// later entries overwrite earlier ones on the overlap)
StepFunction from_boxes(const std::vector<std::pair<Box, Complex>>& pieces);

// indicator of the annular block A_m = I_m^n, I_m = [-2^m,-2^-m) u [2^-m, 2^m)
StepFunction indicator_block(int m, int n);

// Structured text format: "dim n" header, then one record per cell
// "lo_1 hi_1 ... lo_n hi_n re im" in lexicographic breakpoint order.
void write_step(std::ostream& out, const StepFunction& f);
StepFunction read_step(std::istream& in);
StepFunction read_step_file(const std::string& path);
void write_step_file(const std::string& path, const StepFunction& f);

// Iterates over all cell keys of a mesh ([0, count) per axis).
struct CellIter {
    const TensorMesh* mesh;
    explicit CellIter(const TensorMesh& m) : mesh(&m) {}
    template <typename F> void for_each(F&& fn) const {
        CellKey key(mesh->dim(), 0);
        for (int i = 0; i < mesh->dim(); ++i)
            if (mesh->cell_count(i) <= 0) return;
        while (true) {
            fn(key);
            int i = 0;
            for (; i < mesh->dim(); ++i) {
                if (++key[i] < mesh->cell_count(i)) break;
                key[i] = 0;
            }
            if (i == mesh->dim()) return;
        }
    }
};

}  // namespace herz

#endif
