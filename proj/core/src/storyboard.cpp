#include "mapreel/storyboard.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace mapreel {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string seconds(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::round(v * 1000.0) / 1000.0);
    return buf;
}

std::string escape(std::string_view text) {
    std::string out;
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

struct Box {
    double minX = 1e300, minY = 1e300, maxX = -1e300, maxY = -1e300;

    void add(const MercatorPoint& p) {
        minX = std::min(minX, p.x);
        minY = std::min(minY, p.y);
        maxX = std::max(maxX, p.x);
        maxY = std::max(maxY, p.y);
    }
    bool valid() const { return minX <= maxX && minY <= maxY; }
};

// Maps world units into a panel, preserving aspect ratio.
struct View {
    double scale = 1.0;
    double ox = 0.0, oy = 0.0;
    double px = 0.0, py = 0.0;

    std::string pt(const MercatorPoint& m) const {
        return num(px + (m.x - ox) * scale) + "," + num(py + (m.y - oy) * scale);
    }
};

View fit(Box box, double x, double y, double w, double h) {
    double bw = box.maxX - box.minX;
    double bh = box.maxY - box.minY;
    const double minSpan = 1e-7;
    if (bw < minSpan) {
        box.minX -= minSpan / 2;
        bw = minSpan;
    }
    if (bh < minSpan) {
        box.minY -= minSpan / 2;
        bh = minSpan;
    }
    const double pad = 0.08;
    const double s = std::min(w * (1 - 2 * pad) / bw, h * (1 - 2 * pad) / bh);
    View v;
    v.scale = s;
    v.ox = box.minX;
    v.oy = box.minY;
    v.px = x + (w - bw * s) / 2;
    v.py = y + (h - bh * s) / 2;
    return v;
}

std::string polygonPoints(const View& v, const std::vector<GeoPoint>& ring) {
    std::string s;
    for (const auto& p : ring) {
        if (!s.empty()) s += ' ';
        s += v.pt(project(p));
    }
    return s;
}

void drawFeature(std::ostringstream& svg, const View& v, const Geometry& g, const char* cls) {
    if (const auto* p = std::get_if<GeoPoint>(&g)) {
        const auto m = project(*p);
        svg << "<circle class=\"" << cls << "\" cx=\"" << num(v.px + (m.x - v.ox) * v.scale) << "\" cy=\""
            << num(v.py + (m.y - v.oy) * v.scale) << "\" r=\"2\"/>\n";
    } else if (const auto* l = std::get_if<GeoPolyline>(&g)) {
        svg << "<polyline class=\"" << cls << "\" points=\"" << polygonPoints(v, l->vertices()) << "\"/>\n";
    } else if (const auto* r = std::get_if<GeoPolygon>(&g)) {
        svg << "<polygon class=\"" << cls << "\" points=\"" << polygonPoints(v, r->ring()) << "\"/>\n";
    }
}

void drawTarget(std::ostringstream& svg, const View& v, const GeospatialTarget& target) {
    auto one = [&](const GeospatialTarget::Single& s) {
        std::visit(
            [&](const auto& t) {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, Location>) drawFeature(svg, v, Geometry{t.point}, "target");
                else if constexpr (std::is_same_v<T, Region>) drawFeature(svg, v, Geometry{t.polygon}, "target");
                else drawFeature(svg, v, Geometry{t.polyline}, "target");
            },
            s);
    };
    if (target.single()) one(*target.single());
    for (const auto& m : target.members()) one(m);
}

std::string footprintPoints(const View& v, const Footprint& f) {
    std::string s;
    for (const auto& c : f.world) {
        if (!s.empty()) s += ' ';
        s += v.pt(c);
    }
    return s;
}

MercatorPoint clampWorld(MercatorPoint p) {
    p.x = std::clamp(p.x, -0.5, 1.5);
    p.y = std::clamp(p.y, -0.5, 1.5);
    return p;
}

}  // namespace

std::string panelLabel(const MovementRecord& m) {
    std::string shots;
    for (const auto& s : m.shots) {
        if (!shots.empty()) shots += "+";
        shots += shotLabel(s);
    }
    const std::string purpose = m.purpose ? std::string(toString(*m.purpose)) : "Manual";
    return purpose + "/" + shots + " @ " + seconds(m.movement.startTime) + "–" + seconds(m.movement.endTime()) +
           "s";
}

std::string storyboard(const ResolvedStory& story, const CameraScript& script, const StoryboardOptions& options) {
    const int cols = std::max(1, options.columns);
    const int pw = options.panelWidth;
    const int ph = options.panelHeight;
    const int labelH = 24;
    const int gap = 12;
    const std::size_t count = script.movements.size();
    const int rows = static_cast<int>((count + cols - 1) / cols);
    const int width = gap + cols * (pw + gap);
    const int bandTop = gap + rows * (ph + labelH + gap);
    const int bandH = 28;
    const int height = bandTop + bandH + 2 * gap + 16;

    Box dataBox;
    for (const auto& ds : story.datasets) {
        for (const auto& f : ds.features) {
            const auto b = project(boundsOf(toTarget(f)));
            dataBox.add(b.min);
            dataBox.add(b.max);
        }
    }

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<style>"
           ".panel{fill:#f7f7f4;stroke:#999}"
           ".data{fill:#9a9a9a;stroke:#9a9a9a;stroke-width:0.5;fill-opacity:0.35}"
           ".extent{fill:none;stroke:#bbb;stroke-dasharray:3 3}"
           ".target{fill:#f28e2b;stroke:#c05a00;stroke-width:1.5;fill-opacity:0.5}"
           "polyline.target,polyline.data{fill:none}"
           ".fp-start{fill:none;stroke:#4e79a7;stroke-width:1.5;stroke-dasharray:5 3}"
           ".fp-end{fill:none;stroke:#1f3b73;stroke-width:2}"
           ".arrow{stroke:#e15759;stroke-width:2;marker-end:url(#head)}"
           ".label{font:12px sans-serif;fill:#222}"
           ".band{fill:#d4e3f2;stroke:#4e79a7}"
           ".filler{fill:#eee;stroke:#bbb}"
           ".band-label{font:10px sans-serif;fill:#222}"
           "</style>\n";
    svg << "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
           "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#e15759\"/></marker>";
    for (std::size_t i = 0; i < count; ++i) {
        const int x = gap + static_cast<int>(i % cols) * (pw + gap);
        const int y = gap + static_cast<int>(i / cols) * (ph + labelH + gap);
        svg << "<clipPath id=\"clip" << i << "\"><rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << pw
            << "\" height=\"" << ph << "\"/></clipPath>";
    }
    svg << "</defs>\n";

    for (std::size_t i = 0; i < count; ++i) {
        const auto& m = script.movements[i];
        const int x = gap + static_cast<int>(i % cols) * (pw + gap);
        const int y = gap + static_cast<int>(i / cols) * (ph + labelH + gap);
        const Viewport vp = m.window.size();
        const auto start = footprint(m.movement.startState(), vp);
        const auto end = footprint(m.movement.endState(), vp);

        Box box;
        for (const auto& c : start.world) box.add(clampWorld(c));
        for (const auto& c : end.world) box.add(clampWorld(c));
        if (!m.target.isNone()) {
            const auto b = project(boundsOf(m.target));
            box.add(b.min);
            box.add(b.max);
        }
        const View v = fit(box, x, y, pw, ph);

        svg << "<g class=\"movement\" id=\"panel-" << escape(m.id) << "\">\n";
        svg << "<rect class=\"panel\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << pw << "\" height=\"" << ph
            << "\"/>\n";
        svg << "<g clip-path=\"url(#clip" << i << ")\">\n";
        if (dataBox.valid()) {
            svg << "<rect class=\"extent\" x=\"" << num(v.px + (dataBox.minX - v.ox) * v.scale) << "\" y=\""
                << num(v.py + (dataBox.minY - v.oy) * v.scale) << "\" width=\""
                << num((dataBox.maxX - dataBox.minX) * v.scale) << "\" height=\""
                << num((dataBox.maxY - dataBox.minY) * v.scale) << "\"/>\n";
        }
        for (const auto& ds : story.datasets) {
            for (const auto& f : ds.features) drawFeature(svg, v, f.geometry, "data");
        }
        drawTarget(svg, v, m.target);
        svg << "<polygon class=\"fp-start\" points=\"" << footprintPoints(v, start) << "\"/>\n";
        svg << "<polygon class=\"fp-end\" points=\"" << footprintPoints(v, end) << "\"/>\n";
        svg << "<line class=\"arrow\" x1=\"" << num(v.px + (project(m.movement.startState().center).x - v.ox) * v.scale)
            << "\" y1=\"" << num(v.py + (project(m.movement.startState().center).y - v.oy) * v.scale) << "\" x2=\""
            << num(v.px + (project(m.movement.endState().center).x - v.ox) * v.scale) << "\" y2=\""
            << num(v.py + (project(m.movement.endState().center).y - v.oy) * v.scale) << "\"/>\n";
        svg << "</g>\n";
        svg << "<text class=\"label\" x=\"" << x + 4 << "\" y=\"" << y + ph + 16 << "\">" << escape(panelLabel(m))
            << "</text>\n";
        svg << "</g>\n";
    }

    // Location groups beneath the panels, on a shared time axis.
    const double total = script.duration;
    const double axisW = width - 2 * gap;
    auto tx = [&](double t) { return gap + (total > 0 ? t / total * axisW : 0.0); };
    svg << "<g class=\"groups\">\n";
    for (const auto& f : script.timeline.fillers) {
        svg << "<rect class=\"filler\" x=\"" << num(tx(f.startTime)) << "\" y=\"" << bandTop << "\" width=\""
            << num(tx(f.endTime()) - tx(f.startTime)) << "\" height=\"" << bandH << "\"/>\n";
    }
    for (const auto& g : script.timeline.groups) {
        svg << "<g class=\"group\"><rect class=\"band\" x=\"" << num(tx(g.startTime())) << "\" y=\"" << bandTop
            << "\" width=\"" << num(tx(g.endTime()) - tx(g.startTime())) << "\" height=\"" << bandH << "\"/>";
        svg << "<text class=\"band-label\" x=\"" << num(tx(g.startTime()) + 3) << "\" y=\"" << bandTop + 17 << "\">"
            << escape(g.label) << "</text></g>\n";
    }
    svg << "</g>\n";
    svg << "<text class=\"label\" x=\"" << gap << "\" y=\"" << bandTop + bandH + 18 << "\">0s</text>";
    svg << "<text class=\"label\" x=\"" << width - gap << "\" y=\"" << bandTop + bandH + 18
        << "\" text-anchor=\"end\">" << seconds(total) << "s</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace mapreel
