#include "herzlab/sequence_field.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace herz {

bool SequenceField::empty() const {
    for (auto& [j, f] : entries)
        if (!f.is_zero()) return false;
    return true;
}

void SequenceField::set_entry(int j, StepFunction f) {
    if (!(f.mesh == mesh)) f = f.reexpressed(common_refine(mesh, f.mesh));
    if (!(f.mesh == mesh)) {
        // the common refinement may be strictly finer than the shared mesh;
        // migrate every existing entry onto it
        TensorMesh ref = f.mesh;
        for (auto& [i, g] : entries) g = g.reexpressed(ref);
        mesh = ref;
    }
    entries[j] = std::move(f);
}

const StepFunction* SequenceField::entry(int j) const {
    auto it = entries.find(j);
    return it == entries.end() ? nullptr : &it->second;
}

SequenceField SequenceField::reexpressed(const TensorMesh& finer) const {
    SequenceField out(finer);
    for (auto& [j, f] : entries) out.entries.emplace(j, f.reexpressed(finer));
    return out;
}

StepFunction SequenceField::ell_r_combine(const Exponent& r) const {
    StepFunction out(mesh);
    std::map<CellKey, double> acc;
    for (auto& [j, f] : entries) {
        for (auto& [k, v] : f.cells) {
            double m = std::abs(v);
            if (m == 0.0) continue;
            double& slot = acc[k];
            if (r.is_inf()) slot = std::max(slot, m);
            else slot += std::pow(m, r.v);
        }
    }
    for (auto& [k, s] : acc) {
        double v = r.is_inf() ? s : std::pow(s, 1.0 / r.v);
        if (v != 0.0) out.cells.emplace(k, Complex(v, 0.0));
    }
    return out;
}

SequenceField make_shared_mesh(const std::map<int, StepFunction>& entries) {
    if (entries.empty()) throw std::invalid_argument("make_shared_mesh: empty family");
    TensorMesh mesh = entries.begin()->second.mesh;
    for (auto& [j, f] : entries) mesh = common_refine(mesh, f.mesh);
    SequenceField out(mesh);
    for (auto& [j, f] : entries) out.entries.emplace(j, f.reexpressed(mesh));
    return out;
}

void write_family(std::ostream& out, const SequenceField& F) {
    out << "dim " << F.dim() << " family\n";
    out.precision(17);
    for (auto& [j, f] : F.entries) {
        for (auto& [key, v] : f.cells) {
            out << j << " ";
            for (int i = 0; i < F.dim(); ++i) {
                Interval c = f.mesh.cell(i, key[i]);
                out << c.lo.str() << " " << c.hi.str() << " ";
            }
            out << v.real() << " " << v.imag() << "\n";
        }
    }
}

SequenceField read_family(std::istream& in) {
    std::string tag, fam;
    int n = 0;
    if (!(in >> tag >> n >> fam) || tag != "dim" || fam != "family" || n < 1)
        throw std::runtime_error("read_family: bad header");
    std::map<int, std::vector<std::pair<Box, Complex>>> pieces;
    int j;
    while (in >> j) {
        Box b;
        std::string tok;
        for (int i = 0; i < n; ++i) {
            if (!(in >> tok)) throw std::runtime_error("read_family: truncated record");
            Rational lo = Rational::parse(tok);
            if (!(in >> tok)) throw std::runtime_error("read_family: truncated record");
            Rational hi = Rational::parse(tok);
            b.edges.emplace_back(lo, hi);
        }
        double re, im;
        if (!(in >> re >> im)) throw std::runtime_error("read_family: truncated record");
        pieces[j].emplace_back(b, Complex(re, im));
    }
    std::map<int, StepFunction> entries;
    for (auto& [jj, ps] : pieces) entries.emplace(jj, from_boxes(ps));
    if (entries.empty()) throw std::runtime_error("read_family: no records");
    return make_shared_mesh(entries);
}

SequenceField read_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open family file: " + path);
    return read_family(in);
}

void write_family_file(const std::string& path, const SequenceField& F) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    write_family(out, F);
}

}  // namespace herz
