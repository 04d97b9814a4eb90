#ifndef HERZLAB_CORPUS_HPP
#define HERZLAB_CORPUS_HPP

#include <cstdint>

#include "herzlab/norms.hpp"
#include "herzlab/interpolation.hpp"

namespace herz {

// Deterministic instance generator. All draws go through the raw 64-bit
// engine so equal seeds give byte-identical corpora everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next();
    int uniform_int(int lo, int hi);       // inclusive bounds
    double uniform(double lo, double hi);  // [lo, hi)
    bool coin() { return (next() & 1) != 0; }

  private:
    std::uint64_t state_;
};

struct CorpusLimits {
    int max_dim = 3;
    int max_m = 4;       // supports inside A_m
    int max_pieces = 8;  // random boxes per function
    int max_cells = 64;  // nonzero cells after refinement
};

// random dyadic interval on one sign side of A_m
Interval random_interval(Rng& rng, int m, bool negative);

// simple function supported in A_m (no cells touching 0)
StepFunction random_step(Rng& rng, int n, const CorpusLimits& lim, bool complex_coeffs = true,
                         bool nonneg = false);

// adds one cell touching 0 per chosen axis (for divergence checks)
StepFunction random_tail_step(Rng& rng, int n, const CorpusLimits& lim);

SequenceField random_family(Rng& rng, int n, int entries, const CorpusLimits& lim,
                            bool complex_coeffs = true);

// exponent from the usual acceptance grid {1, 3/2, 2, 3, inf}
Exponent random_exponent(Rng& rng, bool allow_one = true, bool allow_inf = true);

// admissible parameters: alpha_i uniform in (-1/q_i, 1-1/q_i)
HerzParams random_admissible_params(Rng& rng, int n, bool allow_one = true,
                                    bool allow_inf = true);

// family with support exactly A_m on every entry |j| < m (interpolation side)
SequenceField random_full_block_family(Rng& rng, int n, int m, bool complex_coeffs = true);

InterpPath random_path(Rng& rng, int n, double theta, bool equal_sides = false);

}  // namespace herz

#endif
