#pragma once

#include <string>
#include <vector>

namespace fibrecalc {

/// Outcome of one internal consistency suite. Suites use fixed seeds, so
/// repeated runs are identical.
struct SuiteResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string detail;
};

/// Smith-form invariants (U*A*V = D, unimodular transforms, divisor chain)
/// over random integer matrices.
SuiteResult snf_suite(int trials = 500);

/// signature(P^T G P) == signature(G) for random symmetric G and random
/// unimodular P.
SuiteResult signature_congruence_suite(int trials = 100);

/// Orthogonality, spanning and signature additivity for the unimodular
/// splittings used by every built-in scenario lattice.
SuiteResult split_scenario_suite();

/// free_rank(coker A) = rows - rank(A) and free_rank(rim cokernel) =
/// 2g - rank(A) over random gluing specs, plus assembled-rank consistency.
SuiteResult rank_nullity_suite(int trials = 100);

std::vector<SuiteResult> run_all_suites();

}  // namespace fibrecalc
