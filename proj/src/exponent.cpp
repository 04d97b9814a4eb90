#include "herzlab/exponent.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace herz {

Exponent Exponent::parse(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") return Exponent::inf();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        double n = std::stod(s.substr(0, slash));
        double d = std::stod(s.substr(slash + 1));
        return Exponent(n / d);
    }
    return Exponent(std::stod(s));
}

std::string Exponent::str() const {
    if (is_inf()) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Exponent conjugate_exponent(const Exponent& q) {
    if (!(q.v >= 1.0)) throw std::domain_error("conjugate_exponent: requires q >= 1");
    if (q.v == 1.0) return Exponent::inf();
    if (q.is_inf()) return Exponent(1.0);
    return Exponent(q.v / (q.v - 1.0));
}

void HerzParams::validate() const {
    if (alpha.empty() || alpha.size() != p.size() || alpha.size() != q.size())
        throw std::invalid_argument("HerzParams: alpha/p/q must share length n >= 1");
}

bool HerzParams::all_ge_one() const {
    for (auto& e : p) if (!(e.v >= 1.0)) return false;
    for (auto& e : q) if (!(e.v >= 1.0)) return false;
    return true;
}

HerzParams HerzParams::uniform(int n, double a, Exponent pp, Exponent qq) {
    HerzParams out;
    out.alpha.assign(n, a);
    out.p.assign(n, pp);
    out.q.assign(n, qq);
    return out;
}

HerzParams dual_params(const HerzParams& params) {
    params.validate();
    if (!params.all_ge_one())
        throw std::domain_error("dual_params: all exponents must lie in [1, inf]");
    HerzParams out;
    out.alpha.reserve(params.dim());
    for (double a : params.alpha) out.alpha.push_back(-a);
    for (auto& e : params.p) out.p.push_back(conjugate_exponent(e));
    for (auto& e : params.q) out.q.push_back(conjugate_exponent(e));
    return out;
}

AdmissibilityVerdict admissibility_check(const HerzParams& params) {
    params.validate();
    AdmissibilityVerdict v;
    v.quasi_banach = true;
    v.banach = params.all_ge_one();
    for (int i = 0; i < params.dim(); ++i) {
        double rq = params.q[i].recip();
        bool quasi = params.alpha[i] > -rq;
        bool ban = quasi && params.p[i].v >= 1.0 && params.q[i].v >= 1.0 &&
                   params.alpha[i] < 1.0 - rq;
        v.quasi_banach_coord.push_back(quasi);
        v.banach_coord.push_back(ban);
        v.quasi_banach = v.quasi_banach && quasi;
        v.banach = v.banach && ban;
    }
    return v;
}

HerzParams read_params(std::istream& in) {
    HerzParams out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
        std::string tok;
        if (tag == "alpha") {
            while (ls >> tok) out.alpha.push_back(std::stod(tok));
        } else if (tag == "p") {
            while (ls >> tok) out.p.push_back(Exponent::parse(tok));
        } else if (tag == "q") {
            while (ls >> tok) out.q.push_back(Exponent::parse(tok));
        } else {
            throw std::invalid_argument("read_params: unknown line tag '" + tag + "'");
        }
    }
    out.validate();
    return out;
}

void write_params(std::ostream& out, const HerzParams& params) {
    out << "alpha";
    out.precision(17);
    for (double a : params.alpha) out << " " << a;
    out << "\np";
    for (auto& e : params.p) out << " " << e.str();
    out << "\nq";
    for (auto& e : params.q) out << " " << e.str();
    out << "\n";
}

HerzParams read_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file: " + path);
    return read_params(in);
}

}  // namespace herz
