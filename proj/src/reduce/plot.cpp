#include "ideoaxis/reduce/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ideoaxis/common/error.hpp"
#include "ideoaxis/common/io.hpp"

namespace ideoaxis::reduce {

namespace {

constexpr const char* kSidecarHeader = "# ideoaxis-plot 1";
constexpr const char* kTableHeader = "id\tkind\tparty\tx\ty";

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 60.0, kRight = 600.0, kTop = 40.0, kBottom = 420.0;

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return io::format_double(v); }

const PlanarPoint* find_single(const std::vector<PlanarPoint>& points, PointKind kind) {
    const PlanarPoint* found = nullptr;
    for (const auto& p : points) {
        if (p.kind != kind) continue;
        if (found != nullptr) {
            throw PreconditionError("plot expects exactly one " + to_string(kind) + " point");
        }
        found = &p;
    }
    if (found == nullptr) {
        throw PreconditionError("plot is missing its " + to_string(kind) + " point");
    }
    return found;
}

}  // namespace

std::string party_color(const std::string& party) {
    static const std::map<std::string, std::string> palette = {
        {"LDP", "#66c2a5"}, {"NDP", "#fc8d62"},     {"CDP", "#8da0cb"},
        {"JCP", "#e78ac3"}, {"Komeito", "#a6d854"}, {"JRP", "#ffd92f"},
    };
    auto it = palette.find(party);
    return it == palette.end() ? "#999999" : it->second;
}

PlotPayload plot_payload(const std::vector<PlanarPoint>& points, const PlotMeta& meta) {
    const PlanarPoint* pro = find_single(points, PointKind::ANCHOR_PRO);
    const PlanarPoint* con = find_single(points, PointKind::ANCHOR_CON);
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw PreconditionError("point \"" + p.id + "\" has non-finite coordinates");
        }
    }

    double xmin = points[0].x, xmax = points[0].x, ymin = points[0].y, ymax = points[0].y;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double xpad = std::max((xmax - xmin) * 0.05, 1e-9);
    const double ypad = std::max((ymax - ymin) * 0.05, 1e-9);
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;
    const double xspan = xmax - xmin;
    const double yspan = ymax - ymin;

    auto sx = [&](double x) { return kLeft + (x - xmin) / xspan * (kRight - kLeft); };
    auto sy = [&](double y) { return kBottom - (y - ymin) / yspan * (kBottom - kTop); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" fill=\"#ffffff\"/>\n";
    svg += "  <text x=\"" + num(kLeft) + "\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">" +
           xml_escape(meta.topic_id + " — " + meta.axis_method + " axis (" +
                      to_string(meta.reducer) + ", seed " + std::to_string(meta.seed) + ")") +
           "</text>\n";

    // Anchor-joining segment sits under every marker.
    svg += "  <line x1=\"" + num(sx(pro->x)) + "\" y1=\"" + num(sy(pro->y)) + "\" x2=\"" +
           num(sx(con->x)) + "\" y2=\"" + num(sy(con->y)) +
           "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";

    for (const auto& p : points) {
        if (p.kind != PointKind::SEED_SENTENCE) continue;
        svg += "  <circle cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) +
               "\" r=\"3\" fill=\"#cccccc\" stroke=\"#888888\" stroke-width=\"0.5\"><title>" +
               xml_escape(p.id) + "</title></circle>\n";
    }
    for (const auto& p : points) {
        if (p.kind != PointKind::SPEAKER) continue;
        const std::string party = p.party.value_or("");
        svg += "  <circle cx=\"" + num(sx(p.x)) + "\" cy=\"" + num(sy(p.y)) + "\" r=\"5\" fill=\"" +
               party_color(party) + "\" stroke=\"#333333\" stroke-width=\"0.6\"><title>" +
               xml_escape(p.id + (party.empty() ? "" : " (" + party + ")")) +
               "</title></circle>\n";
    }
    // Enlarged anchors: pro blue, con red.
    svg += "  <circle cx=\"" + num(sx(pro->x)) + "\" cy=\"" + num(sy(pro->y)) +
           "\" r=\"10\" fill=\"#1c4fd7\" stroke=\"#0a2a80\" stroke-width=\"1\"><title>" +
           xml_escape(pro->id) + "</title></circle>\n";
    svg += "  <circle cx=\"" + num(sx(con->x)) + "\" cy=\"" + num(sy(con->y)) +
           "\" r=\"10\" fill=\"#d7301c\" stroke=\"#7f1d10\" stroke-width=\"1\"><title>" +
           xml_escape(con->id) + "</title></circle>\n";
    svg += "  <text x=\"" + num(sx(pro->x) + 12.0) + "\" y=\"" + num(sy(pro->y) + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1c4fd7\">" +
           xml_escape(meta.anchor_labels[0]) + "</text>\n";
    svg += "  <text x=\"" + num(sx(con->x) + 12.0) + "\" y=\"" + num(sy(con->y) + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d7301c\">" +
           xml_escape(meta.anchor_labels[1]) + "</text>\n";

    // Legend for the parties actually present (rect swatches, so marker
    // counts stay meaningful).
    std::set<std::string> parties;
    for (const auto& p : points) {
        if (p.kind == PointKind::SPEAKER && p.party.has_value()) parties.insert(*p.party);
    }
    double ly = kTop + 8.0;
    for (const auto& party : parties) {
        svg += "  <rect x=\"" + num(kRight + 8.0) + "\" y=\"" + num(ly - 9.0) +
               "\" width=\"10\" height=\"10\" fill=\"" + party_color(party) + "\"/>\n";
        svg += "  <text x=\"" + num(kRight + 22.0) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(party) +
               "</text>\n";
        ly += 16.0;
    }
    svg += "</svg>\n";

    std::string sidecar;
    sidecar += std::string(kSidecarHeader) + "\n";
    sidecar += "# topic_id=" + meta.topic_id + "\n";
    sidecar += "# axis_method=" + meta.axis_method + "\n";
    sidecar += "# anchor_pro=" + meta.anchor_labels[0] + "\n";
    sidecar += "# anchor_con=" + meta.anchor_labels[1] + "\n";
    sidecar += "# reducer=" + to_string(meta.reducer) + "\n";
    sidecar += "# seed=" + std::to_string(meta.seed) + "\n";
    sidecar += "# umap_n_neighbors=" + std::to_string(meta.umap.n_neighbors) + "\n";
    sidecar += "# umap_min_dist=" + num(meta.umap.min_dist) + "\n";
    sidecar += "# umap_a=" + num(meta.umap.a) + "\n";
    sidecar += "# umap_b=" + num(meta.umap.b) + "\n";
    sidecar += "# umap_n_epochs=" + std::to_string(meta.umap.n_epochs) + "\n";
    sidecar += "# umap_learning_rate=" + num(meta.umap.learning_rate) + "\n";
    sidecar += "# umap_negative_samples=" + std::to_string(meta.umap.negative_samples) + "\n";
    sidecar += std::string(kTableHeader) + "\n";
    for (const auto& p : points) {
        sidecar += p.id + "\t" + to_string(p.kind) + "\t" + p.party.value_or("") + "\t" +
                   num(p.x) + "\t" + num(p.y) + "\n";
    }
    return PlotPayload{std::move(svg), std::move(sidecar)};
}

SidecarData parse_sidecar(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) lines.push_back(current);

    if (lines.empty() || lines[0] != kSidecarHeader) {
        throw SchemaVersionError("not an ideoaxis plot sidecar (bad first line)");
    }
    SidecarData data;
    std::map<std::string, std::string> kv;
    std::size_t row = 1;
    for (; row < lines.size(); ++row) {
        const auto& line = lines[row];
        if (line == kTableHeader) break;
        if (line.rfind("# ", 0) != 0) {
            throw ParseError("metadata", "sidecar line " + std::to_string(row + 1) +
                                             " is neither metadata nor the table header");
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("metadata", "metadata line without '=': " + line);
        }
        kv[line.substr(2, eq - 2)] = line.substr(eq + 1);
    }
    if (row == lines.size()) throw ParseError("table", "sidecar has no point table");

    try {
        data.meta.topic_id = kv.at("topic_id");
        data.meta.axis_method = kv.at("axis_method");
        data.meta.anchor_labels = {kv.at("anchor_pro"), kv.at("anchor_con")};
        data.meta.reducer = method_from_string(kv.at("reducer"));
        data.meta.seed = std::stoull(kv.at("seed"));
        data.meta.umap.n_neighbors = std::stoi(kv.at("umap_n_neighbors"));
        data.meta.umap.min_dist = std::stod(kv.at("umap_min_dist"));
        data.meta.umap.a = std::stod(kv.at("umap_a"));
        data.meta.umap.b = std::stod(kv.at("umap_b"));
        data.meta.umap.n_epochs = std::stoi(kv.at("umap_n_epochs"));
        data.meta.umap.learning_rate = std::stod(kv.at("umap_learning_rate"));
        data.meta.umap.negative_samples = std::stoi(kv.at("umap_negative_samples"));
    } catch (const std::out_of_range&) {
        throw ParseError("metadata", "sidecar is missing a required metadata key");
    } catch (const std::invalid_argument&) {
        throw ParseError("metadata", "sidecar metadata value is not a number");
    }

    for (std::size_t i = row + 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = io::split(lines[i], '\t');
        if (fields.size() != 5) {
            throw ParseError("row", "sidecar row " + std::to_string(i + 1) + " has " +
                                        std::to_string(fields.size()) + " fields, expected 5");
        }
        PlanarPoint p;
        p.id = fields[0];
        p.kind = point_kind_from_string(fields[1]);
        if (!fields[2].empty()) p.party = fields[2];
        try {
            p.x = std::stod(fields[3]);
            p.y = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw ParseError("row", "sidecar row " + std::to_string(i + 1) +
                                        " has non-numeric coordinates");
        }
        data.points.push_back(std::move(p));
    }
    return data;
}

}  // namespace ideoaxis::reduce
