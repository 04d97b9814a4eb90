#include "herzlab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "herzlab/corpus.hpp"
#include "herzlab/duality.hpp"
#include "herzlab/interpolation.hpp"
#include "herzlab/maximal.hpp"

namespace herz::suite {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HERZLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return std::clamp<int>((int)hw, 1, 8);
}

// deterministic parallel map: worker i fills slot i; the first exception is
// rethrown on the caller after all workers have stopped
template <typename F>
void parallel_for(int count, int threads, F&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, count); ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) { h ^= c; h *= 1099511628211ull; }
    return h;
}

std::string digest(std::uint64_t seed, const std::string& tag, int count) {
    std::ostringstream os;
    os << seed << ":" << tag << ":" << count;
    std::ostringstream hex;
    hex << "fnv:" << std::hex << fnv1a(os.str());
    return hex.str();
}

double rel_err(double a, double b) {
    if (std::isinf(a) && std::isinf(b)) return 0.0;
    double s = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / s;
}

struct Ctx {
    std::uint64_t seed;
    int threads;
    bool quick;
    int count(int full) const { return quick ? std::max(4, full / 20) : full; }
};

// ---------------------------------------------------------------- C1/C2

CheckRecord check_extremizer(const Ctx& ctx, bool exact_subcase) {
    const int N = ctx.count(exact_subcase ? 200 : 500);
    const double eps_grid[3] = {1e-3, 0.1, 1.0};
    std::vector<double> worst_norm(N), worst_pair(N);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 977 + i * 31 + (exact_subcase ? 7 : 0));
        int n = rng.uniform_int(1, 3);
        CorpusLimits lim;
        lim.max_pieces = n == 3 ? 4 : 8;
        StepFunction l = random_step(rng, n, lim);
        HerzParams params;
        for (int c = 0; c < n; ++c) {
            Exponent q = random_exponent(rng, !exact_subcase, !exact_subcase);
            Exponent p = random_exponent(rng, !exact_subcase, !exact_subcase);
            if (exact_subcase) {
                if (q.v == 1.0 || q.is_inf()) q = Exponent(2.0);
                if (p.v == 1.0 || p.is_inf()) p = Exponent(2.0);
            }
            double rq = q.recip();
            params.alpha.push_back(rng.uniform(-rq + 1e-3, 1.0 - rq - 1e-3));
            params.p.push_back(p);
            params.q.push_back(q);
        }
        double eps = eps_grid[rng.uniform_int(0, 2)];
        auto [ghat, trace] = build_extremizer(l, params, eps);
        double dual = mixed_herz_norm(ghat, dual_params(params));
        Complex pr = pairing(l, ghat);
        double target = exact_subcase ? trace.input_norm
                                      : std::pow(1.0 + eps, -2.0 * n) * trace.input_norm;
        worst_norm[i] = std::fabs(dual - 1.0);
        worst_pair[i] = exact_subcase ? rel_err(pr.real(), target)
                                      : (target - pr.real()) / trace.input_norm;
    });
    double wn = *std::max_element(worst_norm.begin(), worst_norm.end());
    double wp = *std::max_element(worst_pair.begin(), worst_pair.end());
    CheckRecord rec;
    rec.id = exact_subcase ? "C02-extremizer-exact-equality" : "C01-extremizer-bracket";
    rec.anchor = exact_subcase ? "pairing equals the norm for interior exponents"
                               : "unit dual norm and (1+eps)^(-2n) pairing bound";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = std::max(wn, wp);
    rec.bound = 1e-9;
    rec.pass = wn <= 1e-9 && wp <= 1e-9;
    std::ostringstream d;
    d << "instances=" << N << " max|dual-1|=" << wn
      << (exact_subcase ? " max rel pairing error=" : " max normalized pairing deficit=") << wp;
    rec.detail = d.str();
    return rec;
}

// ---------------------------------------------------------------- C3

CheckRecord check_hoelder(const Ctx& ctx) {
    const int N = ctx.count(1000);
    std::vector<double> worst(N, 0.0);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 1231 + i);
        int n = rng.uniform_int(1, 3);
        CorpusLimits lim;
        lim.max_pieces = n == 3 ? 4 : 8;
        StepFunction f = random_step(rng, n, lim);
        StepFunction g = random_step(rng, n, lim);
        HerzParams params;
        for (int c = 0; c < n; ++c) {
            params.alpha.push_back(rng.uniform(-1.0, 1.0));
            params.p.push_back(random_exponent(rng));
            params.q.push_back(random_exponent(rng));
        }
        double lhs = std::abs(pairing(f, g));
        double rhs = mixed_herz_norm(f, params) * mixed_herz_norm(g, dual_params(params));
        worst[i] = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? HUGE_VAL : 0.0);
    });
    CheckRecord rec;
    rec.id = "C03-hoelder";
    rec.anchor = "pairing bounded by norm times dual norm";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = *std::max_element(worst.begin(), worst.end());
    rec.bound = 1.0 + 1e-9;
    rec.pass = rec.value <= rec.bound;
    rec.detail = "pairs=" + std::to_string(N);
    return rec;
}

// ---------------------------------------------------------------- C4

CheckRecord check_convexification(const Ctx& ctx) {
    const int N = ctx.count(200);
    const double r_grid[3] = {0.5, 2.0, 3.0};
    std::vector<double> worst(N, 0.0);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 4099 + i);
        int n = rng.uniform_int(1, 3);
        CorpusLimits lim;
        lim.max_pieces = n == 3 ? 4 : 8;
        bool tail = i % 7 == 0;
        StepFunction f = tail ? random_tail_step(rng, n, lim) : random_step(rng, n, lim);
        HerzParams params;
        for (int c = 0; c < n; ++c) {
            Exponent q = random_exponent(rng);
            double rq = q.recip();
            double alpha;
            do {
                alpha = rng.uniform(-1.0, 1.0);
            } while (tail && std::fabs(alpha + rq) < 0.05);
            params.alpha.push_back(alpha);
            params.p.push_back(random_exponent(rng));
            params.q.push_back(q);
        }
        double r = r_grid[rng.uniform_int(0, 2)];
        auto [lhs, rhs] = convexify_norm(f, r, params);
        worst[i] = rel_err(lhs, rhs);
    });
    CheckRecord rec;
    rec.id = "C04-convexification";
    rec.anchor = "r-convexified norm equals the rescaled-parameter norm";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = *std::max_element(worst.begin(), worst.end());
    rec.bound = 1e-12;
    rec.pass = rec.value <= rec.bound;
    rec.detail = "instances=" + std::to_string(N) + " incl. divergent tails";
    return rec;
}

// ---------------------------------------------------------------- C5

CheckRecord check_indicator(const Ctx& ctx) {
    const double alphas[4] = {-0.4, 0.0, 0.5, 1.0};
    std::vector<Exponent> exps = {Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent::inf()};
    double worst = 0.0;
    int grid = 0;
    for (int n = 1; n <= 3 && grid < 100; ++n)
        for (int m = 1; m <= 2; ++m)
            for (double a : alphas)
                for (auto& p : exps)
                    for (auto& q : exps) {
                        if (grid >= 100) break;
                        HerzParams params = HerzParams::uniform(n, a, p, q);
                        double closed = indicator_block_norm(m, params);
                        double engine = mixed_herz_norm(indicator_block(m, n), params);
                        worst = std::max(worst, rel_err(closed, engine));
                        ++grid;
                    }

    // divergence flags on zero-adjacent supports
    bool flags_ok = true;
    Rng rng(ctx.seed * 57);
    for (int t = 0; t < 60; ++t) {
        int n = rng.uniform_int(1, 2);
        std::vector<std::pair<Box, Complex>> pieces;
        Box b;
        for (int i = 0; i < n; ++i) b.edges.emplace_back(Rational(0), Rational(1));
        pieces.emplace_back(b, Complex(1.0, 0.0));
        StepFunction f = from_boxes(pieces);
        HerzParams params;
        bool expect_divergent = false;
        for (int i = 0; i < n; ++i) {
            Exponent q = random_exponent(rng);
            Exponent p = random_exponent(rng);
            double rq = q.recip();
            double a = rng.uniform(-rq - 0.7, 1.0 - rq);
            if (std::fabs(a + rq) < 0.05) a += 0.1;
            params.alpha.push_back(a);
            params.p.push_back(p);
            params.q.push_back(q);
            double e = a + rq;
            if (p.is_inf() ? e < 0.0 : e <= 0.0) expect_divergent = true;
        }
        bool divergent = std::isinf(mixed_herz_norm(f, params));
        if (divergent != expect_divergent) flags_ok = false;
    }

    CheckRecord rec;
    rec.id = "C05-indicator-closed-form";
    rec.anchor = "block indicator norm in closed form; divergence at the admissibility edge";
    rec.inputs_digest = digest(ctx.seed, rec.id, grid);
    rec.value = worst;
    rec.bound = 1e-12;
    rec.pass = worst <= 1e-12 && flags_ok;
    rec.detail = "grid=" + std::to_string(grid) +
                 std::string(flags_ok ? " divergence flags exact" : " divergence flags WRONG");
    return rec;
}

// ---------------------------------------------------------------- C6

CheckRecord check_family_extremizer(const Ctx& ctx) {
    const int N = ctx.count(200);
    std::vector<double> worst_norm(N), worst_pair(N);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 6151 + i);
        int n = rng.uniform_int(1, 2);
        CorpusLimits lim;
        lim.max_pieces = 4;
        int entries = rng.uniform_int(1, 4);
        SequenceField l = random_family(rng, n, entries, lim);
        HerzParams params;
        for (int c = 0; c < n; ++c) {
            Exponent q = random_exponent(rng);
            Exponent p = random_exponent(rng);
            double rq = q.recip();
            params.alpha.push_back(rng.uniform(-rq + 1e-3, 1.0 - rq - 1e-3));
            params.p.push_back(p);
            params.q.push_back(q);
        }
        int rpick = rng.uniform_int(0, 2);
        Exponent r = rpick == 0 ? Exponent(1.0) : (rpick == 1 ? Exponent(2.0) : Exponent::inf());
        double eps = rpick == 1 ? 0.1 : (i % 2 ? 1e-3 : 1.0);
        SequenceField ghat = build_family_extremizer(l, params, r, eps);
        double dual = family_norm(ghat, dual_params(params), conjugate_exponent(r));
        Complex pr(0.0, 0.0);
        for (auto& [j, f] : l.entries) {
            const StepFunction* g = ghat.entry(j);
            if (g) pr += pairing(f, *g);
        }
        double fam = family_norm(l, params, r);
        double target = std::pow(1.0 + eps, -2.0 * n - 1.0) * fam;
        worst_norm[i] = std::fabs(dual - 1.0);
        worst_pair[i] = (target - pr.real()) / fam;
    });
    double wn = *std::max_element(worst_norm.begin(), worst_norm.end());
    double wp = *std::max_element(worst_pair.begin(), worst_pair.end());
    CheckRecord rec;
    rec.id = "C06-family-extremizer";
    rec.anchor = "sequence-space dual norm 1 and (1+eps)^(-2n-1) pairing bound";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = std::max(wn, wp);
    rec.bound = 1e-9;
    rec.pass = wn <= 1e-9 && wp <= 1e-9;
    std::ostringstream d;
    d << "instances=" << N << " max|dual-1|=" << wn << " max deficit=" << wp;
    rec.detail = d.str();
    return rec;
}

// ---------------------------------------------------------------- C7

double oracle_interval_max(const StepFunction& f, double x) {
    // independent enumeration: every endpoint pair, direct integration
    std::vector<double> pts{x};
    std::vector<std::pair<double, double>> cells;  // (lo, hi) with modulus
    std::vector<double> vals;
    for (auto& [key, v] : f.cells) {
        Interval c = f.mesh.cell(0, key[0]);
        double lo = c.lo.to_double(), hi = c.hi.to_double();
        pts.push_back(lo);
        pts.push_back(hi);
        pts.push_back(0.5 * (lo + hi));
        cells.emplace_back(lo, hi);
        vals.push_back(std::abs(v));
    }
    auto mass = [&](double a, double b) {
        double s = 0.0;
        for (size_t c = 0; c < cells.size(); ++c) {
            double lo = std::max(cells[c].first, a), hi = std::min(cells[c].second, b);
            if (hi > lo) s += vals[c] * (hi - lo);
        }
        return s;
    };
    double best = 0.0;
    for (size_t c = 0; c < cells.size(); ++c)
        if (cells[c].first <= x && x < cells[c].second) best = vals[c];
    for (double a : pts)
        for (double b : pts) {
            if (!(a <= x && x <= b && b > a)) continue;
            best = std::max(best, mass(a, b) / (b - a));
        }
    return best;
}

CheckRecord check_maximal_oracle(const Ctx& ctx) {
    const int N = ctx.count(200);
    std::vector<double> worst(N, 0.0);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 7919 + i);
        CorpusLimits lim;
        lim.max_pieces = 10;
        StepFunction f = random_step(rng, 1, lim);
        for (int t = 0; t < 6; ++t) {
            double x = rng.uniform(-20.0, 20.0);
            double got = directional_maximal_at(f, 0, {x});
            double want = oracle_interval_max(f, x);
            worst[i] = std::max(worst[i], std::fabs(got - want));
        }
    });
    CheckRecord rec;
    rec.id = "C07-maximal-oracle";
    rec.anchor = "interval-average sup matches the brute-force enumeration";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = *std::max_element(worst.begin(), worst.end());
    rec.bound = 1e-6;
    rec.pass = rec.value <= rec.bound;
    rec.detail = "instances=" + std::to_string(N) + " x6 sample points";
    return rec;
}

// ---------------------------------------------------------------- C8

CheckRecord check_boundedness_stability(const Ctx& ctx) {
    struct Inst { StepFunction f; HerzParams params; MaximalOp op; };
    std::vector<Inst> insts;
    Rng rng(ctx.seed * 10007);
    int per_dim[3] = {4, 4, ctx.quick ? 0 : 1};
    for (int n = 1; n <= 3; ++n) {
        for (int t = 0; t < per_dim[n - 1]; ++t) {
            Inst in;
            CorpusLimits lim;
            lim.max_pieces = n == 1 ? 6 : (n == 2 ? 4 : 2);
            lim.max_m = n == 3 ? 2 : 3;
            in.f = random_step(rng, n, lim, false);
            for (int c = 0; c < n; ++c) {
                Exponent q = random_exponent(rng, false, false);
                Exponent p = random_exponent(rng, false, false);
                double rq = q.recip();
                in.params.alpha.push_back(rng.uniform(-rq + 0.1, 1.0 - rq - 0.1));
                in.params.p.push_back(p);
                in.params.q.push_back(q);
            }
            in.op.kind = t % 2 == 0 ? MaximalOp::iterated : MaximalOp::directional;
            in.op.coordinate = rng.uniform_int(0, n - 1);
            in.op.t = 1.0;
            insts.push_back(std::move(in));
        }
    }
    std::vector<double> drift(insts.size()), ratio8(insts.size());
    parallel_for((int)insts.size(), ctx.threads, [&](int i) {
        double r4 = boundedness_ratio(insts[i].op, insts[i].f, insts[i].params, 4);
        double r8 = boundedness_ratio(insts[i].op, insts[i].f, insts[i].params, 8);
        drift[i] = std::fabs(r4 - r8) / std::max(r8, 1e-300);
        ratio8[i] = r8;
    });
    double worst_drift = *std::max_element(drift.begin(), drift.end());
    double max_ratio = *std::max_element(ratio8.begin(), ratio8.end());
    CheckRecord rec;
    rec.id = "C08-maximal-boundedness-stability";
    rec.anchor = "norm ratio of the maximal image is refinement-stable and finite";
    rec.inputs_digest = digest(ctx.seed, rec.id, (int)insts.size());
    rec.value = worst_drift;
    rec.bound = 0.05;
    rec.pass = worst_drift < 0.05 && std::isfinite(max_ratio);
    std::ostringstream d;
    d << "corpus=" << insts.size() << " max ratio=" << max_ratio;
    rec.detail = d.str();
    return rec;
}

// ---------------------------------------------------------------- C9

CheckRecord check_fefferman_stein(const Ctx& ctx) {
    struct Inst { SequenceField F; HerzParams params; };
    std::vector<Inst> insts;
    Rng rng(ctx.seed * 11311);
    int count = ctx.quick ? 2 : 6;
    for (int t = 0; t < count; ++t) {
        Inst in;
        int n = t % 2 == 0 ? 1 : 2;
        CorpusLimits lim;
        lim.max_pieces = n == 1 ? 5 : 3;
        lim.max_m = 3;
        int entries = n == 1 ? rng.uniform_int(2, 8) : rng.uniform_int(2, 4);
        in.F = random_family(rng, n, entries, lim, false);
        for (int c = 0; c < n; ++c) {
            Exponent q = random_exponent(rng, false, false);
            Exponent p = random_exponent(rng, false, false);
            double rq = q.recip();
            in.params.alpha.push_back(rng.uniform(-rq + 0.1, 1.0 - rq - 0.1));
            in.params.p.push_back(p);
            in.params.q.push_back(q);
        }
        insts.push_back(std::move(in));
    }
    const double u_grid[3] = {1.5, 2.0, 4.0};
    std::vector<double> drift(insts.size(), 0.0), maxratio(insts.size(), 0.0);
    parallel_for((int)insts.size(), ctx.threads, [&](int i) {
        auto images = [&](int refine) {
            std::map<int, StepFunction> out;
            for (auto& [j, f] : insts[i].F.entries)
                out.emplace(j, iterated_maximal(f, 1.0, refine).base);
            return make_shared_mesh(out);
        };
        SequenceField M4 = images(4), M8 = images(8);
        for (double u : u_grid) {
            Exponent ue(u);
            double denom = family_norm(insts[i].F, insts[i].params, ue);
            double r4 = family_norm(M4, insts[i].params, ue) / denom;
            double r8 = family_norm(M8, insts[i].params, ue) / denom;
            drift[i] = std::max(drift[i], std::fabs(r4 - r8) / std::max(r8, 1e-300));
            maxratio[i] = std::max(maxratio[i], r8);
        }
    });
    double worst = *std::max_element(drift.begin(), drift.end());
    double mr = *std::max_element(maxratio.begin(), maxratio.end());
    CheckRecord rec;
    rec.id = "C09-fefferman-stein";
    rec.anchor = "vector-valued maximal ratio finite and refinement-stable";
    rec.inputs_digest = digest(ctx.seed, rec.id, (int)insts.size());
    rec.value = worst;
    rec.bound = 0.05;
    rec.pass = worst < 0.05 && std::isfinite(mr);
    std::ostringstream d;
    d << "families=" << insts.size() << " u in {3/2,2,4} max ratio=" << mr;
    rec.detail = d.str();
    return rec;
}

// ---------------------------------------------------------------- C10

CheckRecord check_rubio(const Ctx& ctx) {
    Rng rng(ctx.seed * 13331);
    int count = ctx.quick ? 2 : 6;
    double worst_gap = 0.0, worst_ratio = 0.0;
    bool ok = true;
    for (int t = 0; t < count; ++t) {
        int n = t % 2 == 0 ? 1 : 2;
        CorpusLimits lim;
        lim.max_pieces = n == 1 ? 5 : 3;
        lim.max_m = 3;
        StepFunction h = random_step(rng, n, lim, false, true);
        HerzParams base;
        for (int c = 0; c < n; ++c) {
            Exponent q = random_exponent(rng, false, false);
            Exponent p = random_exponent(rng, false, false);
            double rq = q.recip();
            base.alpha.push_back(rng.uniform(-rq + 0.1, 1.0 - rq - 0.1));
            base.p.push_back(p);
            base.q.push_back(q);
        }
        HerzParams designated = dual_params(base);
        const int refine = 4;
        for (int K : {4, 8}) {
            // measure the stagewise expansion in the designated norm
            double normM = 1.0;
            {
                SampledField stage = directional_maximal_field(h, n - 1, refine);
                double prev = mixed_herz_norm(h, designated);
                for (int k = 1; k <= K; ++k) {
                    double cur = mixed_herz_norm(stage.base, designated);
                    normM = std::max(normM, cur / std::max(prev, 1e-300));
                    prev = cur;
                    if (k < K) stage = directional_maximal_field(stage.base, n - 1, 1, 1);
                }
            }
            SampledField R = rubio_francia(h, K, normM, refine);
            // pointwise domination h <= Rh
            if (!dominated_by(h, R.base, 1e-12)) ok = false;
            double hr = mixed_herz_norm(h, designated);
            double rr = mixed_herz_norm(R.base, designated);
            double slack = std::exp2(-(double)K);
            worst_ratio = std::max(worst_ratio, rr / (2.0 * hr * (1.0 + slack)));
            worst_gap = std::max(worst_gap, 0.0);
        }
    }
    CheckRecord rec;
    rec.id = "C10-rubio-iteration";
    rec.anchor = "iterated majorant dominates the input with norm at most twice";
    rec.inputs_digest = digest(ctx.seed, rec.id, count);
    rec.value = worst_ratio;
    rec.bound = 1.0;
    rec.pass = ok && worst_ratio <= 1.0;
    rec.detail = std::string(ok ? "pointwise domination holds" : "pointwise domination FAILS") +
                 "; K in {4,8}";
    return rec;
}

// ---------------------------------------------------------------- C11

CheckRecord check_interpolation_identities(const Ctx& ctx) {
    const int N = ctx.count(100);
    const double h_grid[5] = {-2.0, -0.5, 0.0, 1.0, 3.0};
    std::vector<double> worst_id(N, 0.0), worst_bd(N, 0.0);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 17291 + i);
        int n = rng.uniform_int(1, 3);
        int m = n == 3 ? 1 : rng.uniform_int(1, 2);
        CorpusLimits lim;
        lim.max_pieces = n == 3 ? 3 : 6;
        lim.max_m = std::min(m + 1, 3);
        StepFunction psi = random_step(rng, n, lim);
        SequenceField phi = random_full_block_family(rng, n, std::max(m, 1));
        double thetas[3] = {0.25, 0.5, 0.75};
        InterpPath path = random_path(rng, n, thetas[rng.uniform_int(0, 2)]);

        StepFunction Ftheta = build_F(psi, path, Complex(path.theta, 0.0));
        double scale = std::max(1.0, psi.max_abs());
        worst_id[i] = max_cell_difference(Ftheta, psi) / scale;

        SequenceField Gtheta = build_G(phi, path, Complex(path.theta, 0.0));
        for (auto& [j, f] : phi.entries) {
            const StepFunction* g = Gtheta.entry(j);
            double gs = std::max(1.0, f.max_abs());
            double diff = g ? max_cell_difference(*g, f) : f.max_abs();
            worst_id[i] = std::max(worst_id[i], diff / gs);
        }

        for (double h : h_grid) {
            BoundaryReport rep = boundary_identities(psi, phi, path, h);
            worst_bd[i] = std::max(worst_bd[i], rep.max_rel_error());
        }
    });
    double wi = *std::max_element(worst_id.begin(), worst_id.end());
    double wb = *std::max_element(worst_bd.begin(), worst_bd.end());
    CheckRecord rec;
    rec.id = "C11-interpolation-identities";
    rec.anchor = "families collapse at theta; boundary norms are powers of the input norms";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = std::max(wi, wb);
    rec.bound = 1e-9;
    rec.pass = wi <= 1e-12 && wb <= 1e-9;
    std::ostringstream d;
    d << "instances=" << N << " max cell deviation=" << wi << " max boundary error=" << wb;
    rec.detail = d.str();
    return rec;
}

// ---------------------------------------------------------------- C12

CheckRecord check_three_lines(const Ctx& ctx) {
    const int N = ctx.count(100);
    double worst = 0.0;
    std::vector<double> worst_v(N, 0.0);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 19471 + i);
        int n = rng.uniform_int(1, 2);
        int m = rng.uniform_int(1, 2);
        CorpusLimits lim;
        lim.max_pieces = 5;
        lim.max_m = m;
        StepFunction psi = random_step(rng, n, lim);
        SequenceField phi = random_full_block_family(rng, n, m);
        double thetas[3] = {0.25, 0.5, 0.75};
        InterpPath path = random_path(rng, n, thetas[i % 3], /*equal_sides=*/true);

        LinearOperatorSpec T = i % 2 == 0
                                   ? LinearOperatorSpec::make_identity()
                                   : LinearOperatorSpec::make_dyadic(
                                         {-(m + 1), -m, 0, m}, rng.uniform_int(0, n - 1));
        std::vector<std::pair<StepFunction, SequenceField>> corpus;
        corpus.emplace_back(psi, phi);
        auto [m0, m1] = certified_line_bounds(T, path, corpus);
        ThreeLinesReport rep = three_lines_verify(T, path, m0, m1, corpus);
        worst_v[i] = rep.max_ratio;
    });
    worst = *std::max_element(worst_v.begin(), worst_v.end());
    CheckRecord rec;
    rec.id = "C12-three-lines";
    rec.anchor = "interpolated pairing bounded by the geometric mean of the line bounds";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = worst;
    rec.bound = 1.0 + 1e-9;
    rec.pass = worst <= rec.bound;
    rec.detail = "pairs=" + std::to_string(N) + " ops {identity, dyadic averages}";
    return rec;
}

// ---------------------------------------------------------------- C13

CheckRecord check_stein_dual(const Ctx& ctx) {
    const int N = ctx.count(100);
    std::vector<double> drift(N, 0.0), ratios(N, 0.0);
    parallel_for(N, ctx.threads, [&](int i) {
        Rng rng(ctx.seed * 23117 + i);
        int n = rng.uniform_int(1, 2);
        CorpusLimits lim;
        lim.max_pieces = n == 1 ? 5 : 3;
        lim.max_m = 3;
        StepFunction f = random_step(rng, n, lim, false);
        StepFunction phi = random_step(rng, n, lim, false, true);
        double r = i % 2 == 0 ? 1.5 : 2.0;
        auto [l4, r4] = stein_dual_check(f, phi, r, 4);
        auto [l8, r8] = stein_dual_check(f, phi, r, 8);
        double q4 = r4 > 0.0 ? l4 / r4 : 0.0;
        double q8 = r8 > 0.0 ? l8 / r8 : 0.0;
        drift[i] = std::fabs(q4 - q8) / std::max(q8, 1e-300);
        ratios[i] = q8;
    });
    double worst = *std::max_element(drift.begin(), drift.end());
    double mr = *std::max_element(ratios.begin(), ratios.end());
    CheckRecord rec;
    rec.id = "C13-stein-dual";
    rec.anchor = "dual-weighted maximal integrals stay in bounded ratio";
    rec.inputs_digest = digest(ctx.seed, rec.id, N);
    rec.value = worst;
    rec.bound = 0.10;
    rec.pass = worst < 0.10 && std::isfinite(mr);
    std::ostringstream d;
    d << "instances=" << N << " r in {3/2,2} max lhs/rhs=" << mr;
    rec.detail = d.str();
    return rec;
}

}  // namespace

SuiteResult run_acceptance(std::uint64_t seed, int threads, bool quick) {
    Ctx ctx{seed, resolve_threads(threads), quick};
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult result;
    result.records.push_back(check_extremizer(ctx, false));
    result.records.push_back(check_extremizer(ctx, true));
    result.records.push_back(check_hoelder(ctx));
    result.records.push_back(check_convexification(ctx));
    result.records.push_back(check_indicator(ctx));
    result.records.push_back(check_family_extremizer(ctx));
    result.records.push_back(check_maximal_oracle(ctx));
    result.records.push_back(check_boundedness_stability(ctx));
    result.records.push_back(check_fefferman_stein(ctx));
    result.records.push_back(check_rubio(ctx));
    result.records.push_back(check_interpolation_identities(ctx));
    result.records.push_back(check_three_lines(ctx));
    result.records.push_back(check_stein_dual(ctx));
    for (auto& r : result.records) result.all_pass = result.all_pass && r.pass;
    auto t1 = std::chrono::steady_clock::now();
    result.seconds = std::chrono::duration<double>(t1 - t0).count();
    return result;
}

std::string report_json(const SuiteResult& result, std::uint64_t seed) {
    // no timing fields: a fixed seed and config must give identical bytes
    nlohmann::ordered_json j;
    j["suite"] = "acceptance";
    j["seed"] = seed;
    j["all_pass"] = result.all_pass;
    j["records"] = nlohmann::ordered_json::array();
    for (auto& r : result.records) {
        nlohmann::ordered_json rec;
        rec["id"] = r.id;
        rec["anchor"] = r.anchor;
        rec["inputs"] = r.inputs_digest;
        rec["value"] = r.value;
        rec["bound"] = r.bound;
        rec["pass"] = r.pass;
        rec["detail"] = r.detail;
        j["records"].push_back(rec);
    }
    return j.dump(2) + "\n";
}

}  // namespace herz::suite
