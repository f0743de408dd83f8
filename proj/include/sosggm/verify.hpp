// Self-check suite behind the `verify` CLI subcommand.
#pragma once

#include <iosfwd>
#include <string>

namespace sosggm {

struct VerifyOptions {
    std::string only;     // when non-empty, run a single group by name
    unsigned seed = 1;    // seed for the randomized checks
};

// Runs the check groups (polyroots, factorization, boundary, dual, field,
// ggm, phase), printing one ok/FAIL line per check. Returns true when every
// executed check passed. Unknown group names throw std::invalid_argument.
bool run_verify(const VerifyOptions &opt, std::ostream &os);

}  // namespace sosggm
