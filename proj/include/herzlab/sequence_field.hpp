#ifndef HERZLAB_SEQUENCE_FIELD_HPP
#define HERZLAB_SEQUENCE_FIELD_HPP

#include <iosfwd>
#include <map>

#include "herzlab/exponent.hpp"
#include "herzlab/step_function.hpp"

namespace herz {

// Finite family j -> step function on one shared mesh; entries for indices
// outside the map are identically 0.
struct SequenceField {
    TensorMesh mesh;
    std::map<int, StepFunction> entries;

    int dim() const { return mesh.dim(); }
    bool empty() const;

    SequenceField() = default;
    explicit SequenceField(TensorMesh m) : mesh(std::move(m)) {}

    void set_entry(int j, StepFunction f);
    const StepFunction* entry(int j) const;

    // re-express every entry on a common refinement with the given mesh
    SequenceField reexpressed(const TensorMesh& finer) const;

    // cellwise (sum_j |f(j,x)|^r)^(1/r); r = inf gives the cellwise sup
    StepFunction ell_r_combine(const Exponent& r) const;
};

// puts all entries on one shared refinement of their meshes
SequenceField make_shared_mesh(const std::map<int, StepFunction>& entries);

// family file: "dim n family", then records "j lo_1 hi_1 ... lo_n hi_n re im"
void write_family(std::ostream& out, const SequenceField& F);
SequenceField read_family(std::istream& in);
SequenceField read_family_file(const std::string& path);
void write_family_file(const std::string& path, const SequenceField& F);

}  // namespace herz

#endif
