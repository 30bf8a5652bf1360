#ifndef KGW_ORACLES_HPP
#define KGW_ORACLES_HPP

#include <map>
#include <string>
#include <vector>

#include "kgw/config.hpp"

namespace kgw {

struct OracleCheck {
    std::string name;
    double measured = 0.0;  // deviation (or margin, see flipped)
    double tolerance = 0.0;
    bool flipped = false;   // pass when measured >= tolerance instead of <=
    bool pass = false;
    std::string note;
};

// Runs the brute-force cross-check suites: finite-dimensional Gaussian
// inversion against quadrature, the thermal trace adjudication, the
// single-mode Wigner reference, and the gamma-matrix identities. A name in
// tolerance_overrides replaces that check's tolerance.
std::vector<OracleCheck> run_oracle_suites(const RunConfig& config,
                                           const std::string& task_filter = "");

} // namespace kgw

#endif
