#include "herzlab/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace herz {

Complex sgn(Complex z) {
    double m = std::abs(z);
    if (m == 0.0) return Complex(0.0, 0.0);
    return z / m;
}

double pow0(double base, double expo) {
    if (base == 0.0) return 0.0;
    if (expo == 0.0) return 1.0;
    return std::exp(expo * std::log(base));
}

Complex pow0c(double base, Complex expo) {
    if (base == 0.0) return Complex(0.0, 0.0);
    return std::exp(expo * std::log(base));
}

void StepFunction::set(const CellKey& key, Complex v) {
    if ((int)key.size() != dim()) throw std::invalid_argument("StepFunction::set: bad key");
    if (v == Complex(0.0, 0.0)) cells.erase(key);
    else cells[key] = v;
}

Complex StepFunction::at_cell(const CellKey& key) const {
    auto it = cells.find(key);
    return it == cells.end() ? Complex(0.0, 0.0) : it->second;
}

Complex StepFunction::eval(const std::vector<Rational>& x) const {
    CellKey key(dim());
    for (int i = 0; i < dim(); ++i) {
        int c = mesh.locate(i, x[i]);
        if (c < 0) return Complex(0.0, 0.0);
        key[i] = c;
    }
    return at_cell(key);
}

Complex StepFunction::eval(const std::vector<double>& x) const {
    CellKey key(dim());
    for (int i = 0; i < dim(); ++i) {
        const Axis& a = mesh.axes[i];
        double v = x[i];
        if (a.size() < 2 || v < a.front().to_double() || v >= a.back().to_double())
            return Complex(0.0, 0.0);
        int lo = 0, hi = (int)a.size() - 1;
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            if (a[mid].to_double() <= v) lo = mid;
            else hi = mid;
        }
        key[i] = lo;
    }
    return at_cell(key);
}

bool StepFunction::is_zero() const {
    for (auto& [k, v] : cells)
        if (v != Complex(0.0, 0.0)) return false;
    return true;
}

double StepFunction::max_abs() const {
    double m = 0.0;
    for (auto& [k, v] : cells) m = std::max(m, std::abs(v));
    return m;
}

bool StepFunction::has_zero_adjacent_support() const {
    for (auto& [key, v] : cells) {
        if (v == Complex(0.0, 0.0)) continue;
        for (int i = 0; i < dim(); ++i) {
            Interval c = mesh.cell(i, key[i]);
            if (c.lo.is_zero() || c.hi.is_zero()) return true;
        }
    }
    return false;
}

void StepFunction::drop_zero_cells(double tol) {
    for (auto it = cells.begin(); it != cells.end();) {
        if (std::abs(it->second) <= tol) it = cells.erase(it);
        else ++it;
    }
}

StepFunction StepFunction::reexpressed(const TensorMesh& finer) const {
    StepFunction out(finer);
    if (cells.empty()) return out;
    // map each fine cell to the coarse cell containing its midpoint
    std::vector<std::vector<int>> lut(dim());
    for (int i = 0; i < dim(); ++i) {
        lut[i].resize(finer.cell_count(i));
        for (int c = 0; c < finer.cell_count(i); ++c)
            lut[i][c] = mesh.locate(i, finer.cell(i, c).midpoint());
    }
    CellIter iter(finer);
    CellKey coarse(dim());
    iter.for_each([&](const CellKey& key) {
        for (int i = 0; i < dim(); ++i) {
            coarse[i] = lut[i][key[i]];
            if (coarse[i] < 0) return;
        }
        Complex v = at_cell(coarse);
        if (v != Complex(0.0, 0.0)) out.cells.emplace(key, v);
    });
    return out;
}

StepFunction StepFunction::map_abs() const {
    StepFunction out(mesh);
    for (auto& [k, v] : cells) out.cells.emplace(k, Complex(std::abs(v), 0.0));
    return out;
}

StepFunction StepFunction::map_power(Complex gamma) const {
    StepFunction out(mesh);
    for (auto& [k, v] : cells) {
        Complex w = pow0c(std::abs(v), gamma);
        if (w != Complex(0.0, 0.0)) out.cells.emplace(k, w);
    }
    return out;
}

StepFunction StepFunction::map_sgn_conj() const {
    StepFunction out(mesh);
    for (auto& [k, v] : cells) {
        Complex w = sgn(std::conj(v));
        if (w != Complex(0.0, 0.0)) out.cells.emplace(k, w);
    }
    return out;
}

StepFunction StepFunction::map_scale(Complex c) const {
    StepFunction out(mesh);
    for (auto& [k, v] : cells) {
        Complex w = c * v;
        if (w != Complex(0.0, 0.0)) out.cells.emplace(k, w);
    }
    return out;
}

StepFunction step_combine(const StepFunction& f, const StepFunction& g, CombineOp op) {
    if (f.dim() != g.dim()) throw std::invalid_argument("step_combine: dimension mismatch");
    TensorMesh ref = common_refine(f.mesh, g.mesh);
    StepFunction a = f.reexpressed(ref), b = g.reexpressed(ref);
    StepFunction out(ref);
    auto emit = [&](const CellKey& k, Complex va, Complex vb) {
        Complex v;
        switch (op) {
            case CombineOp::add: v = va + vb; break;
            case CombineOp::multiply: v = va * vb; break;
            case CombineOp::max_abs: v = Complex(std::max(std::abs(va), std::abs(vb)), 0.0); break;
        }
        if (v != Complex(0.0, 0.0)) out.cells[k] = v;
    };
    for (auto& [k, va] : a.cells) emit(k, va, b.at_cell(k));
    for (auto& [k, vb] : b.cells)
        if (!a.cells.count(k)) emit(k, Complex(0.0, 0.0), vb);
    return out;
}

namespace {
double cell_volume(const TensorMesh& mesh, const CellKey& key) {
    double v = 1.0;
    for (int i = 0; i < mesh.dim(); ++i) v *= mesh.cell(i, key[i]).length().to_double();
    return v;
}
}  // namespace

Complex pairing(const StepFunction& f, const StepFunction& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("pairing: dimension mismatch");
    TensorMesh ref = common_refine(f.mesh, g.mesh);
    StepFunction a = f.reexpressed(ref), b = g.reexpressed(ref);
    Complex total(0.0, 0.0);
    for (auto& [k, va] : a.cells) {
        Complex vb = b.at_cell(k);
        if (vb == Complex(0.0, 0.0)) continue;
        total += va * vb * cell_volume(ref, k);
    }
    return total;
}

Complex integral(const StepFunction& f) {
    Complex total(0.0, 0.0);
    for (auto& [k, v] : f.cells) total += v * cell_volume(f.mesh, k);
    return total;
}

double max_cell_difference(const StepFunction& f, const StepFunction& g) {
    TensorMesh ref = common_refine(f.mesh, g.mesh);
    StepFunction a = f.reexpressed(ref), b = g.reexpressed(ref);
    double m = 0.0;
    for (auto& [k, va] : a.cells) m = std::max(m, std::abs(va - b.at_cell(k)));
    for (auto& [k, vb] : b.cells)
        if (!a.cells.count(k)) m = std::max(m, std::abs(vb));
    return m;
}

bool dominated_by(const StepFunction& g, const StepFunction& f, double tol) {
    TensorMesh ref = common_refine(f.mesh, g.mesh);
    StepFunction a = g.reexpressed(ref), b = f.reexpressed(ref);
    for (auto& [k, va] : a.cells)
        if (std::abs(va) > std::abs(b.at_cell(k)) * (1.0 + tol) + tol) return false;
    return true;
}

StepFunction from_boxes(const std::vector<std::pair<Box, Complex>>& pieces) {
    if (pieces.empty()) throw std::invalid_argument("from_boxes: empty");
    std::vector<Box> boxes;
    for (auto& [b, v] : pieces) boxes.push_back(b);
    TensorMesh mesh = tensor_refine(boxes);
    StepFunction out(mesh);
    int n = mesh.dim();
    for (auto& [b, v] : pieces) {
        if (v == Complex(0.0, 0.0)) continue;
        // enumerate cells covered by the box
        std::vector<std::pair<int, int>> range(n);
        for (int i = 0; i < n; ++i) {
            const Axis& a = mesh.axes[i];
            int lo = (int)(std::lower_bound(a.begin(), a.end(), b.edges[i].lo) - a.begin());
            int hi = (int)(std::lower_bound(a.begin(), a.end(), b.edges[i].hi) - a.begin());
            range[i] = {lo, hi};
        }
        CellKey key(n);
        for (int i = 0; i < n; ++i) key[i] = range[i].first;
        while (true) {
            out.cells[key] = v;
            int i = 0;
            for (; i < n; ++i) {
                if (++key[i] < range[i].second) break;
                key[i] = range[i].first;
            }
            if (i == n) break;
        }
    }
    return out;
}

StepFunction indicator_block(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("indicator_block: needs m,n >= 1");
    Rational inner = Rational::pow2(-m), outer = Rational::pow2(m);
    std::vector<std::pair<Box, Complex>> pieces;
    // 2^n sign octants of I_m^n
    for (int mask = 0; mask < (1 << n); ++mask) {
        Box b;
        for (int i = 0; i < n; ++i) {
            if (mask & (1 << i)) b.edges.emplace_back(-outer, -inner);
            else b.edges.emplace_back(inner, outer);
        }
        pieces.emplace_back(b, Complex(1.0, 0.0));
    }
    return from_boxes(pieces);
}

void write_step(std::ostream& out, const StepFunction& f) {
    out << "dim " << f.dim() << "\n";
    out.precision(17);
    for (auto& [key, v] : f.cells) {
        for (int i = 0; i < f.dim(); ++i) {
            Interval c = f.mesh.cell(i, key[i]);
            out << c.lo.str() << " " << c.hi.str() << " ";
        }
        out << v.real() << " " << v.imag() << "\n";
    }
}

StepFunction read_step(std::istream& in) {
    std::string tag;
    int n = 0;
    if (!(in >> tag >> n) || tag != "dim" || n < 1)
        throw std::runtime_error("read_step: bad header");
    std::vector<std::pair<Box, Complex>> pieces;
    std::string tok;
    while (in >> tok) {
        Box b;
        for (int i = 0; i < n; ++i) {
            if (i > 0 && !(in >> tok)) throw std::runtime_error("read_step: truncated record");
            Rational lo = Rational::parse(tok);
            if (!(in >> tok)) throw std::runtime_error("read_step: truncated record");
            Rational hi = Rational::parse(tok);
            b.edges.emplace_back(lo, hi);
        }
        double re, im;
        if (!(in >> re >> im)) throw std::runtime_error("read_step: truncated record");
        pieces.emplace_back(b, Complex(re, im));
    }
    if (pieces.empty()) {
        StepFunction f;
        TensorMesh mesh;
        mesh.axes.assign(n, Axis{Rational(0), Rational(1)});
        f.mesh = mesh;
        return f;
    }
    return from_boxes(pieces);
}

StepFunction read_step_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open step file: " + path);
    return read_step(in);
}

void write_step_file(const std::string& path, const StepFunction& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    write_step(out, f);
}

}  // namespace herz
