#include "dimcert/figure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dimcert/systems.hpp"

namespace dimcert {

namespace {

const char* kPalette[5] = {"#333333", "#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct SvgWriter {
    std::ofstream out;
    double scale;
    double ox, oy;

    SvgWriter(const std::string& path, double xmin, double ymin, double xmax, double ymax)
        : out(path) {
        double w = xmax - xmin, h = ymax - ymin;
        scale = 900.0 / std::max(w, h);
        ox = xmin;
        oy = ymax; // flip y
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * scale << "\" height=\""
            << h * scale << "\" viewBox=\"0 0 " << w * scale << ' ' << h * scale << "\">\n";
    }
    double X(double x) const { return (x - ox) * scale; }
    double Y(double y) const { return (oy - y) * scale; }
    void circle(double cx, double cy, double r, const char* color, double width) {
        out << "<circle cx=\"" << X(cx) << "\" cy=\"" << Y(cy) << "\" r=\"" << r * scale
            << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"/>\n";
    }
    void polyline(const std::vector<Vec>& pts, const char* color, double width) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
            << "\" points=\"";
        for (const auto& p : pts) out << X(p[0]) << ',' << Y(p[1]) << ' ';
        out << "\"/>\n";
    }
    void close() { out << "</svg>\n"; }
};

bool exact_circle_image(const ConformalMap& f) {
    return f.kind == MapKind::moebius2d || f.kind == MapKind::mobius_nd;
}

} // namespace

void emit_figure(const SystemSpec& spec, int depth, const std::string& path) {
    double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
    for (const auto& r : spec.x_regions) {
        xmin = std::min(xmin, r.center[0] - r.radius);
        xmax = std::max(xmax, r.center[0] + r.radius);
        ymin = std::min(ymin, r.center[1] - r.radius);
        ymax = std::max(ymax, r.center[1] + r.radius);
    }
    double pad = 0.03 * std::max(xmax - xmin, ymax - ymin);
    SvgWriter svg(path, xmin - pad, ymin - pad, xmax + pad, ymax + pad);

    for (const auto& r : spec.x_regions)
        svg.circle(r.center[0], r.center[1], r.radius, kPalette[0], 1.6);

    // words of length d: expand breadth-first under the incidence rule
    struct Word {
        ConformalMap map;
        int len;
    };
    std::vector<Word> frontier;
    for (const auto& f : spec.alphabet.maps) frontier.push_back({f, 1});
    for (int d = 1; d <= depth; ++d) {
        const char* color = kPalette[std::min(d, 4)];
        double width = std::max(0.4, 1.4 - 0.3 * d);
        for (const auto& w : frontier) {
            const Region& src = spec.x_regions[static_cast<size_t>(w.map.source_vertex)];
            if (exact_circle_image(w.map) || w.map.kind == MapKind::composite) {
                bool moebius = true;
                if (w.map.kind == MapKind::composite)
                    for (const auto& part : w.map.parts) moebius &= exact_circle_image(part);
                if (moebius) {
                    BallImage bi = image_ball(w.map, src, spec.n);
                    svg.circle(bi.center[0], bi.center[1], bi.radius, color, width);
                    continue;
                }
            }
            std::vector<Vec> pts;
            const int m = 128;
            pts.reserve(m + 1);
            for (int i = 0; i <= m; ++i) {
                double a = 2.0 * M_PI * i / m;
                Vec p = src.center + Vec{src.radius * std::cos(a), src.radius * std::sin(a)};
                pts.push_back(apply(w.map, p));
            }
            svg.polyline(pts, color, width);
        }
        if (d == depth) break;
        std::vector<Word> next;
        size_t cap = 20000; // keep deep figures bounded
        for (const auto& w : frontier) {
            for (const auto& f : spec.alphabet.maps) {
                if (w.map.source_vertex != f.target_vertex) continue;
                next.push_back({compose({w.map, f}), w.len + 1});
                if (next.size() >= cap) break;
            }
            if (next.size() >= cap) break;
        }
        frontier = std::move(next);
    }
    svg.close();
}

} // namespace dimcert
