#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "herzlab/corpus.hpp"
#include "herzlab/duality.hpp"
#include "herzlab/interpolation.hpp"
#include "herzlab/maximal.hpp"
#include "herzlab/suite.hpp"

namespace {

using namespace herz;
using nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

bool rel_error_ok(double a, double b) {
    double s = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / s <= 1e-12;
}

int cmd_norm(const std::string& fn, const std::string& params_path,
             const std::string& report_path, bool breakdown) {
    StepFunction f = read_step_file(fn);
    HerzParams params = read_params_file(params_path);
    NormBreakdown bd;
    ExtValue v = mixed_herz_norm(f, params, breakdown ? &bd : nullptr);
    std::cout.precision(17);
    std::cout << v << "\n";
    if (!report_path.empty()) {
        ordered_json j;
        j["command"] = "norm";
        j["input"] = fn;
        j["value"] = std::isinf(v) ? ordered_json("inf") : ordered_json(v);
        if (breakdown) {
            j["coordinates"] = ordered_json::array();
            for (auto& c : bd.coordinates) {
                ordered_json rec;
                rec["coordinate"] = c.coordinate;
                rec["annulus_min"] = c.k_min;
                rec["annulus_max"] = c.k_max;
                rec["tail_total"] = c.tail_total;
                rec["diverged"] = c.diverged;
                rec["cells_remaining"] = c.reduced.cells.size();
                j["coordinates"].push_back(rec);
            }
            j["replay_matches"] =
                std::isinf(v) ? std::isinf(bd.replay(params))
                              : rel_error_ok(v, bd.replay(params));
        }
        write_text(report_path, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_extremize(const std::string& fn, const std::string& params_path, double eps,
                  const std::string& report_path) {
    StepFunction l = read_step_file(fn);
    HerzParams params = read_params_file(params_path);
    auto [ghat, trace] = build_extremizer(l, params, eps);
    double dual = mixed_herz_norm(ghat, dual_params(params));
    Complex pr = pairing(l, ghat);
    int n = l.dim();
    double target = std::pow(1.0 + eps, -2.0 * n) * trace.input_norm;
    bool ok = std::fabs(dual - 1.0) <= 1e-9 && pr.real() >= target * (1.0 - 1e-9);

    ordered_json j;
    j["command"] = "extremize";
    j["input"] = fn;
    j["eps"] = eps;
    j["input_norm"] = trace.input_norm;
    j["dual_norm"] = dual;
    j["pairing_re"] = pr.real();
    j["pairing_im"] = pr.imag();
    j["lower_bound"] = target;
    j["pass"] = ok;
    j["levels"] = ordered_json::array();
    for (auto& lv : trace.levels) {
        ordered_json rec;
        rec["level"] = lv.level;
        rec["outer_cells"] = lv.records.size();
        std::size_t strict = 0, fsets = 0;
        double hsum_min = 2.0, hsum_max = -1.0;
        for (auto& r : lv.records) {
            strict += r.strict_set.size();
            fsets += r.f_measures.size();
            if (!r.h_weights.empty()) {
                double s = 0.0;
                for (auto& [k, w] : r.h_weights) s += w;
                hsum_min = std::min(hsum_min, s);
                hsum_max = std::max(hsum_max, s);
            }
        }
        rec["strict_annuli"] = strict;
        rec["level_sets"] = fsets;
        if (hsum_max >= 0.0) {
            rec["h_weight_sum_min"] = hsum_min;
            rec["h_weight_sum_max"] = hsum_max;
        }
        j["levels"].push_back(rec);
    }
    if (!report_path.empty()) write_text(report_path, j.dump(2) + "\n");
    else std::cout << j.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_maximal(const std::string& fn, const std::string& op, int coordinate, double t,
                int refine, const std::string& params_path, const std::string& report_path) {
    StepFunction f = read_step_file(fn);
    ordered_json j;
    j["command"] = "maximal";
    j["op"] = op;
    j["refine"] = refine;
    if (!params_path.empty()) {
        HerzParams params = read_params_file(params_path);
        AdmissibilityVerdict adm = admissibility_check(params);
        j["quasi_banach"] = adm.quasi_banach;
        j["banach"] = adm.banach;
        bool hypotheses = adm.banach;
        for (auto& e : params.p) hypotheses = hypotheses && !e.is_inf() && e.v > 1.0;
        for (auto& e : params.q) hypotheses = hypotheses && !e.is_inf() && e.v > 1.0;
        j["boundedness_hypotheses"] = hypotheses;
        ExtValue nf = mixed_herz_norm(f, params);
        if (std::isinf(nf)) {
            std::cerr << "input norm is divergent for these parameters\n";
            j["input_norm"] = "inf";
            if (!report_path.empty()) write_text(report_path, j.dump(2) + "\n");
            return 1;
        }
        MaximalOp mop;
        if (op == "mk") { mop.kind = MaximalOp::directional; mop.coordinate = coordinate; }
        else if (op == "iter") { mop.kind = MaximalOp::iterated; mop.t = t; }
        else throw CLI::ValidationError("norm-ratio mode supports --op mk or iter");
        double ratio = boundedness_ratio(mop, f, params, refine);
        j["input_norm"] = nf;
        j["ratio"] = ratio;
        std::cout.precision(17);
        std::cout << ratio << "\n";
    } else if (op == "hl") {
        auto [lower, upper] = hl_maximal_bracket(f, refine);
        j["lower_cells"] = lower.base.cells.size();
        j["upper_cells"] = upper.base.cells.size();
        j["bracket_ok"] = dominated_by(lower.base, upper.base, 1e-9);
    } else {
        SampledField field = op == "mk" ? directional_maximal_field(f, coordinate, refine)
                                        : iterated_maximal(f, t, refine);
        j["cells"] = field.base.cells.size();
        j["clip_tail_bound"] = field.clip_tail_bound;
        j["max_value"] = field.base.max_abs();
    }
    if (!report_path.empty()) {
        if (report_path.size() > 4 && report_path.substr(report_path.size() - 4) == ".csv") {
            std::ostringstream csv;
            csv << "key,value\n";
            for (auto& [k, v] : j.items())
                if (!v.is_array() && !v.is_object()) csv << k << "," << v.dump() << "\n";
            write_text(report_path, csv.str());
        } else {
            write_text(report_path, j.dump(2) + "\n");
        }
    }
    return 0;
}

InterpPath read_path_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open path file: " + path);
    InterpPath p;
    std::string line;
    auto fill = [](std::istringstream& ls, HerzParams& P, int which) {
        std::string tok;
        while (ls >> tok) {
            if (which == 0) P.alpha.push_back(std::stod(tok));
            else if (which == 1) P.p.push_back(Exponent::parse(tok));
            else P.q.push_back(Exponent::parse(tok));
        }
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
        if (tag == "beta0") fill(ls, p.psi_side0, 0);
        else if (tag == "s0") fill(ls, p.psi_side0, 1);
        else if (tag == "t0") fill(ls, p.psi_side0, 2);
        else if (tag == "beta1") fill(ls, p.psi_side1, 0);
        else if (tag == "s1") fill(ls, p.psi_side1, 1);
        else if (tag == "t1") fill(ls, p.psi_side1, 2);
        else if (tag == "alpha0") fill(ls, p.family_side0, 0);
        else if (tag == "p0") fill(ls, p.family_side0, 1);
        else if (tag == "q0") fill(ls, p.family_side0, 2);
        else if (tag == "alpha1") fill(ls, p.family_side1, 0);
        else if (tag == "p1") fill(ls, p.family_side1, 1);
        else if (tag == "q1") fill(ls, p.family_side1, 2);
        else if (tag == "theta") ls >> p.theta;
        else throw std::runtime_error("path file: unknown tag '" + tag + "'");
    }
    p.validate();
    return p;
}

int cmd_interp(const std::string& path_file, double theta_override, const std::string& op,
               const std::string& corpus_dir, const std::string& report_path) {
    InterpPath path = read_path_file(path_file);
    if (theta_override >= 0.0) path.theta = theta_override;

    std::vector<std::pair<StepFunction, SequenceField>> corpus;
    for (int i = 0;; ++i) {
        std::string psi_path = corpus_dir + "/psi" + std::to_string(i) + ".step";
        std::string phi_path = corpus_dir + "/phi" + std::to_string(i) + ".fam";
        std::ifstream a(psi_path), b(phi_path);
        if (!a || !b) break;
        corpus.emplace_back(read_step(a), read_family(b));
    }
    if (corpus.empty()) throw std::runtime_error("interp: no corpus pairs found in " + corpus_dir);

    LinearOperatorSpec T;
    if (op == "id") T = LinearOperatorSpec::make_identity();
    else if (op == "zero") T = LinearOperatorSpec::make_zero();
    else if (op == "dyadic") T = LinearOperatorSpec::make_dyadic({-2, -1, 0, 1}, 0);
    else throw CLI::ValidationError("--op must be id|zero|dyadic");

    auto [m0, m1] = certified_line_bounds(T, path, corpus);
    ThreeLinesReport rep = three_lines_verify(T, path, m0, m1, corpus);

    ordered_json j;
    j["command"] = "interp";
    j["theta"] = path.theta;
    j["op"] = op;
    j["m0"] = m0;
    j["m1"] = m1;
    j["max_ratio"] = rep.max_ratio;
    j["pairs"] = ordered_json::array();
    for (size_t i = 0; i < rep.phi_abs.size(); ++i) {
        ordered_json rec;
        rec["phi_abs"] = rep.phi_abs[i];
        rec["ratio"] = rep.ratios[i];
        j["pairs"].push_back(rec);
    }
    bool ok = rep.max_ratio <= 1.0 + 1e-9;
    j["pass"] = ok;
    if (!report_path.empty()) write_text(report_path, j.dump(2) + "\n");
    else std::cout << j.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_corpus(std::uint64_t seed, int count, int dim, const std::string& out_dir) {
    Rng rng(seed);
    CorpusLimits lim;
    ordered_json manifest;
    manifest["seed"] = seed;
    manifest["count"] = count;
    manifest["files"] = ordered_json::array();
    for (int i = 0; i < count; ++i) {
        int n = dim > 0 ? dim : rng.uniform_int(1, 3);
        bool tail = i % 8 == 7;
        StepFunction f = tail ? random_tail_step(rng, n, lim) : random_step(rng, n, lim);
        std::string name = "f" + std::to_string(i) + ".step";
        write_step_file(out_dir + "/" + name, f);
        ordered_json rec;
        rec["file"] = name;
        rec["dim"] = n;
        rec["cells"] = f.cells.size();
        rec["tail"] = tail;
        manifest["files"].push_back(rec);
    }
    write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    return 0;
}

int cmd_suite(std::uint64_t seed, bool quick, const std::string& report_path) {
    herz::suite::SuiteResult res = herz::suite::run_acceptance(seed, 0, quick);
    for (auto& r : res.records)
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ": value=" << r.value
                  << " bound=" << r.bound << " (" << r.detail << ")\n";
    std::cout << (res.all_pass ? "ALL PASS" : "FAILURES PRESENT") << " in " << res.seconds
              << "s\n";
    if (!report_path.empty()) write_text(report_path, herz::suite::report_json(res, seed));
    return res.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"herzlab: exact mixed-norm Herz space computations on step functions"};
    app.require_subcommand(1);

    // norm
    std::string fn, params_path, report_path;
    bool breakdown = false;
    auto* norm = app.add_subcommand("norm", "mixed Herz norm of a step function");
    norm->add_option("--fn", fn, "step-function file")->required();
    norm->add_option("--params", params_path, "parameter file")->required();
    norm->add_option("--report", report_path, "JSON report path");
    norm->add_flag("--breakdown", breakdown, "include the per-coordinate reduction");

    // extremize
    double eps = 1e-3;
    auto* extremize = app.add_subcommand("extremize", "construct the dual near-extremizer");
    extremize->add_option("--fn", fn, "step-function file")->required();
    extremize->add_option("--params", params_path, "parameter file")->required();
    extremize->add_option("--eps", eps, "slack parameter")->required();
    extremize->add_option("--report", report_path, "JSON report path");

    // maximal
    std::string op = "iter";
    int coordinate = 0, refine = 4;
    double t = 1.0;
    auto* maximal = app.add_subcommand("maximal", "maximal-operator experiments");
    maximal->add_option("--fn", fn, "step-function file")->required();
    maximal->add_option("--op", op, "mk | iter | hl");
    maximal->add_option("--coordinate", coordinate, "acting coordinate for mk");
    maximal->add_option("--t", t, "power for the iterated operator");
    maximal->add_option("--refine", refine, "sampling refinement");
    maximal->add_option("--params", params_path, "parameter file (norm ratio mode)");
    maximal->add_option("--report", report_path, "report path (.json or .csv)");

    // interp
    std::string path_file, corpus_dir;
    double theta = -1.0;
    auto* interp = app.add_subcommand("interp", "interpolation-family verification");
    interp->add_option("--path", path_file, "endpoint parameter file")->required();
    interp->add_option("--theta", theta, "override theta");
    interp->add_option("--op", op, "id | zero | dyadic");
    interp->add_option("--corpus", corpus_dir, "corpus directory")->required();
    interp->add_option("--report", report_path, "JSON report path");

    // corpus
    std::uint64_t seed = 42;
    int count = 16, dim = 0;
    std::string out_dir = ".";
    auto* corpus = app.add_subcommand("corpus", "generate a deterministic corpus");
    corpus->add_option("--seed", seed, "seed");
    corpus->add_option("--count", count, "number of functions");
    corpus->add_option("--dim", dim, "fixed dimension (0 = mixed)");
    corpus->add_option("--out", out_dir, "output directory")->required();

    // suite
    bool all = false, quick = false;
    auto* suite = app.add_subcommand("suite", "run the acceptance battery");
    suite->add_flag("--all", all, "run every check (default)");
    suite->add_flag("--quick", quick, "shrunk instance counts");
    suite->add_option("--seed", seed, "seed");
    suite->add_option("--report", report_path, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (norm->parsed()) return cmd_norm(fn, params_path, report_path, breakdown);
        if (extremize->parsed()) return cmd_extremize(fn, params_path, eps, report_path);
        if (maximal->parsed())
            return cmd_maximal(fn, op, coordinate, t, refine, params_path, report_path);
        if (interp->parsed()) return cmd_interp(path_file, theta, op, corpus_dir, report_path);
        if (corpus->parsed()) return cmd_corpus(seed, count, dim, out_dir);
        if (suite->parsed()) return cmd_suite(seed, quick, report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
