#pragma once

// Minimal SVG 1.1 writer. Coordinates are printed with two decimals so the
// output is byte-stable for identical input.

#include <span>
#include <sstream>
#include <string>
#include <string_view>

namespace flexagg::svg {

struct Style {
    std::string fill = "none";
    std::string stroke = "none";
    double stroke_width = 1.0;
    std::string dash;  // stroke-dasharray, empty for solid
    double opacity = 1.0;
};

class Document {
public:
    Document(double width, double height);

    void rect(double x, double y, double w, double h, const Style& style, std::string_view css_class = {});
    void circle(double cx, double cy, double r, const Style& style, std::string_view css_class = {});
    void line(double x1, double y1, double x2, double y2, const Style& style);
    /// Flat list x0, y0, x1, y1, ...
    void polyline(std::span<const double> xy, const Style& style, std::string_view css_class = {});
    void text(double x, double y, std::string_view content, double size = 12.0,
              std::string_view anchor = "start");
    void begin_group(std::string_view id);
    void end_group();

    std::string str() const;

private:
    void style_attrs(const Style& style);

    double width_;
    double height_;
    std::ostringstream body_;
};

std::string format_coord(double v);
std::string escape(std::string_view text);

}  // namespace flexagg::svg
