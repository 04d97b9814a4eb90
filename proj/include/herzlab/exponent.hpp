#ifndef HERZLAB_EXPONENT_HPP
#define HERZLAB_EXPONENT_HPP

#include <cmath>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace herz {

// Extended exponent in (0, inf].
struct Exponent {
    double v = 1.0;

    Exponent() = default;
    explicit Exponent(double x) : v(x) {
        if (!(x > 0.0)) throw std::invalid_argument("Exponent must be positive");
    }
    static Exponent inf() { Exponent e; e.v = std::numeric_limits<double>::infinity(); return e; }

    bool is_inf() const { return std::isinf(v); }
    // 1/v with 1/inf = 0
    double recip() const { return is_inf() ? 0.0 : 1.0 / v; }

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.v == b.v; }

    static Exponent parse(const std::string& s);
    std::string str() const;
};

// Conjugate index: 1/q + 1/q' = 1 with 1' = inf, inf' = 1. Requires q >= 1.
Exponent conjugate_exponent(const Exponent& q);

// Exponent triple of a mixed Herz space: one (alpha_i, p_i, q_i) per coordinate.
struct HerzParams {
    std::vector<double> alpha;
    std::vector<Exponent> p;
    std::vector<Exponent> q;

    int dim() const { return (int)alpha.size(); }
    void validate() const;
    bool all_ge_one() const;

    static HerzParams uniform(int n, double a, Exponent pp, Exponent qq);
};

// (-alpha, p', q'): parameters of the associate space. Requires p, q >= 1.
HerzParams dual_params(const HerzParams& params);

struct AdmissibilityVerdict {
    std::vector<bool> quasi_banach_coord;  // alpha_i > -1/q_i
    std::vector<bool> banach_coord;        // additionally p,q >= 1 and alpha_i < 1 - 1/q_i
    bool quasi_banach = false;
    bool banach = false;
};

AdmissibilityVerdict admissibility_check(const HerzParams& params);

// Params file: lines "alpha a1 ... an", "p p1 ... pn", "q q1 ... qn", inf for infinity.
HerzParams read_params(std::istream& in);
void write_params(std::ostream& out, const HerzParams& params);
HerzParams read_params_file(const std::string& path);

}  // namespace herz

#endif
