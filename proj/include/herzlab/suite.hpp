#ifndef HERZLAB_SUITE_HPP
#define HERZLAB_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace herz::suite {

struct CheckRecord {
    std::string id;
    std::string anchor;          // which guarantee the check audits
    std::string inputs_digest;   // hash of the generated inputs
    double value = 0.0;          // worst observed quantity
    double bound = 0.0;          // threshold it is held against
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::vector<CheckRecord> records;
    bool all_pass = true;
    double seconds = 0.0;
};

// Runs the full acceptance battery. quick shrinks instance counts for smoke
// runs; threads <= 0 means use HERZLAB_THREADS or the hardware default.
SuiteResult run_acceptance(std::uint64_t seed, int threads = 0, bool quick = false);

std::string report_json(const SuiteResult& result, std::uint64_t seed);

}  // namespace herz::suite

#endif
