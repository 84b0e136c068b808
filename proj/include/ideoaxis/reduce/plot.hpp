#pragma once

#include <array>
#include <string>
#include <vector>

#include "ideoaxis/reduce/reduce.hpp"

namespace ideoaxis::reduce {

// Provenance rendered into both the plot and its sidecar: which topic and
// axis the plot shows, and exactly how the 2D fit was produced.
struct PlotMeta {
    std::string topic_id;
    std::string axis_method;  // "PAIR" or "GENERATED"
    std::array<std::string, 2> anchor_labels;  // pro, con
    Method reducer = Method::PCA;
    std::uint64_t seed = 0;
    UmapParams umap;

    bool operator==(const PlotMeta&) const = default;
};

struct PlotPayload {
    std::string svg;      // self-contained vector-graphics document
    std::string sidecar;  // metadata block + point table; regenerates the svg
};

// Renders the anchor-annotated scatter: speakers colored by party, the pro
// anchor as an enlarged blue marker, the con anchor enlarged red, one black
// line joining the two anchors. Throws PreconditionError unless exactly one
// anchor of each side is present.
PlotPayload plot_payload(const std::vector<PlanarPoint>& points, const PlotMeta& meta);

// Sidecar parsing; plot_payload(parse(sidecar)) reproduces the svg byte for
// byte, so a stored sidecar alone regenerates its plot.
struct SidecarData {
    std::vector<PlanarPoint> points;
    PlotMeta meta;
};
SidecarData parse_sidecar(const std::string& text);

// Fill color used for a party code (fixed palette; unknown parties gray).
std::string party_color(const std::string& party);

}  // namespace ideoaxis::reduce
