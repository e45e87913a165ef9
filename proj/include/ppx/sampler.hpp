#pragma once

#include <cstdint>
#include <vector>

#include "ppx/geometry.hpp"
#include "ppx/pattern.hpp"
#include "ppx/process_spec.hpp"

namespace ppx {

struct SamplerOptions {
    // Specs whose expected count in the window exceeds this are rejected
    // before any allocation happens.
    double max_expected_count = 1e7;
};

// All lattice points Gu whose Voronoi cell meets the window.  For toroidal
// windows G must be diagonal and tile the window exactly; the points then
// cover one period with no padding.
std::vector<Point> lattice_points(const Matrix& G, const Window& window);

// Exact expected point count of the process in the window.
double intensity_measure(const ProcessSpec& spec, const Window& window);

// Draws one realization.  Pure function of (spec, window, seed): bit-exact
// reproducible and safe to call concurrently.
PointPattern sample(const ProcessSpec& spec, const Window& window,
                    std::uint64_t seed, const SamplerOptions& options = {});

}  // namespace ppx
