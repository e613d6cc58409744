#pragma once

#include <string>

#include "liecycles/scene.hpp"

namespace lie {

// Plane scenes only (dimension == 2; Unsupported otherwise).  Draws every
// scene cycle, a 12-sample sweep per family, and per-query derived geometry
// (tangent circles, subcycle carriers, cone apexes, extremal pairs).  One
// <g> per scene entity with the scene id; viewBox fitted with a 10% margin.
// Output is deterministic for a fixed scene/report pair.
std::string render_svg(const Scene& scene, const Report& report,
                       const Tolerances& tol = {});

}  // namespace lie
