#pragma once

#include "fibrecalc/pipeline.hpp"

namespace fibrecalc {

// Shared between the pipeline runner and the report renderer.

json json_int(const Int& x);
json json_group(const FinAbGroup& g);
json json_matrix(const IntMatrix& m);
json json_coords(const LatticeVector& v);

json manifold_report(const Manifold4& m, const FibreSumResult* fs,
                     const std::vector<AssertRecord>& asserts);

}  // namespace fibrecalc
