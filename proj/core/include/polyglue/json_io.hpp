#pragma once

#include <string>

#include "polyglue/configmodel.hpp"
#include "polyglue/peeling.hpp"
#include "polyglue/surface.hpp"

namespace polyglue {

// JSON record {"n": n, "alpha": [...], "phi": [...]} with 1-based side
// labels: alpha[i] is the partner of side i+1, phi[i] its face successor.
std::string to_json(const LabeledMap& map);
LabeledMap labeled_map_from_json(const std::string& text);

// {"components": [{"vertices","faces","edges","genus"}...], totals...}
std::string to_json(const MapSummary& summary);

// {"vertex_count", "degrees": [...], "edges": [[i, j, count]...]} with
// 1-based ranks and the twice-loops convention on the diagonal.
std::string to_json(const MultiGraph& graph);

// CSV rows step,kind,peeled,partner,pi,H,L,B,X,red_resampled (1-based side
// labels), then one trailing JSON line holding the final summary. Requires a
// log recorded with events.
std::string trajectory_csv(const TrajectoryLog& log, const MapSummary& summary);

}  // namespace polyglue
