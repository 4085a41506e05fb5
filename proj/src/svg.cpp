#include <algorithm>
#include <cmath>
#include <sstream>

#include "vrd/bench.hpp"

namespace vrd {

namespace {

constexpr const char* kCarrying = "black";
constexpr const char* kEmptyTruck = "blue";
constexpr const char* kFlying = "green";

struct Frame {
    double min_x, min_y, span, size, ox, oy;
    double px(Point p) const { return ox + (static_cast<double>(p.x) - min_x) / span * size; }
    double py(Point p) const { return oy + size - (static_cast<double>(p.y) - min_y) / span * size; }
};

// One polyline per maximal run of same-coloured edges.
void polylines(std::ostringstream& os, const Frame& f, const Instance& inst, const std::vector<int>& nodes,
               const std::vector<const char*>& colour, double width, bool dashed) {
    std::size_t i = 0;
    while (i < colour.size()) {
        std::size_t j = i;
        while (j + 1 < colour.size() && colour[j + 1] == colour[i]) ++j;
        os << "<polyline fill=\"none\" stroke=\"" << colour[i] << "\" stroke-width=\"" << width << '"';
        if (dashed) os << " stroke-dasharray=\"4 3\"";
        os << " points=\"";
        for (std::size_t k = i; k <= j + 1; ++k) {
            const Point p = inst.pos(nodes[k]);
            os << (k == i ? "" : " ") << f.px(p) << ',' << f.py(p);
        }
        os << "\"/>\n";
        i = j + 1;
    }
}

void truck_lines(std::ostringstream& os, const Frame& f, const Instance& inst, const TruckTour& t) {
    std::vector<const char*> c;
    for (const auto& carry : t.carry) c.push_back(carry.empty() ? kEmptyTruck : kCarrying);
    polylines(os, f, inst, t.nodes, c, 2.0, false);
}

void drone_lines(std::ostringstream& os, const Frame& f, const Instance& inst, const DroneTour& d) {
    std::vector<const char*> c;
    for (int t : d.carried) c.push_back(t == 0 ? kFlying : kCarrying);
    polylines(os, f, inst, d.nodes, c, 1.0, true);
}

void markers(std::ostringstream& os, const Frame& f, const Instance& inst) {
    for (int v = 1; v <= inst.n_p; ++v) {
        const Point p = inst.pos(v);
        os << "<circle cx=\"" << f.px(p) << "\" cy=\"" << f.py(p) << "\" r=\"2\" fill=\"gray\"/>\n";
    }
    const Point d{};
    os << "<rect x=\"" << f.px(d) - 5 << "\" y=\"" << f.py(d) - 5 << "\" width=\"10\" height=\"10\" fill=\"red\"/>\n";
}

}  // namespace

std::string render_tours_svg(const Solution& s, const Instance& inst, const SvgStyle& style) {
    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    for (const auto& p : inst.positions) {
        min_x = std::min(min_x, static_cast<double>(p.x));
        max_x = std::max(max_x, static_cast<double>(p.x));
        min_y = std::min(min_y, static_cast<double>(p.y));
        max_y = std::max(max_y, static_cast<double>(p.y));
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
    const double margin = 20.0, size = style.size;
    const std::size_t vehicles = s.trucks.size() + s.drones.size();
    const std::size_t panels = style.per_vehicle ? 1 + vehicles : 1;
    const std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(panels))));
    const std::size_t rows = (panels + cols - 1) / cols;
    const double cell = size + 2 * margin;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell << "\" height=\"" << rows * (cell + 20)
       << "\" viewBox=\"0 0 " << cols * cell << ' ' << rows * (cell + 20) << "\">\n";
    for (std::size_t k = 0; k < panels; ++k) {
        const Frame f{min_x, min_y, span, size, (k % cols) * cell + margin, (k / cols) * (cell + 20) + margin + 20};
        os << "<g>\n<text x=\"" << f.ox << "\" y=\"" << f.oy - 8 << "\" font-family=\"sans-serif\" font-size=\"14\">";
        if (k == 0) {
            os << "all tours</text>\n";
            markers(os, f, inst);
            for (const auto& t : s.trucks) truck_lines(os, f, inst, t);
            for (const auto& d : s.drones) drone_lines(os, f, inst, d);
        } else if (k <= s.trucks.size()) {
            os << "truck " << k << "</text>\n";
            markers(os, f, inst);
            truck_lines(os, f, inst, s.trucks[k - 1]);
        } else {
            os << "drone " << k - s.trucks.size() << "</text>\n";
            markers(os, f, inst);
            drone_lines(os, f, inst, s.drones[k - 1 - s.trucks.size()]);
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace vrd
