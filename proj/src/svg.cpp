#include "flexagg/svg.hpp"

#include <cstdio>

namespace flexagg::svg {

std::string format_coord(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string escape(std::string_view text) {
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

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::style_attrs(const Style& style) {
    body_ << " fill=\"" << style.fill << "\" stroke=\"" << style.stroke << '"';
    if (style.stroke != "none") body_ << " stroke-width=\"" << format_coord(style.stroke_width) << '"';
    if (!style.dash.empty()) body_ << " stroke-dasharray=\"" << style.dash << '"';
    if (style.opacity < 1.0) body_ << " opacity=\"" << format_coord(style.opacity) << '"';
}

void Document::rect(double x, double y, double w, double h, const Style& style, std::string_view css_class) {
    body_ << "<rect";
    if (!css_class.empty()) body_ << " class=\"" << css_class << '"';
    body_ << " x=\"" << format_coord(x) << "\" y=\"" << format_coord(y) << "\" width=\"" << format_coord(w)
          << "\" height=\"" << format_coord(h) << '"';
    style_attrs(style);
    body_ << "/>\n";
}

void Document::circle(double cx, double cy, double r, const Style& style, std::string_view css_class) {
    body_ << "<circle";
    if (!css_class.empty()) body_ << " class=\"" << css_class << '"';
    body_ << " cx=\"" << format_coord(cx) << "\" cy=\"" << format_coord(cy) << "\" r=\"" << format_coord(r)
          << '"';
    style_attrs(style);
    body_ << "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const Style& style) {
    body_ << "<line x1=\"" << format_coord(x1) << "\" y1=\"" << format_coord(y1) << "\" x2=\""
          << format_coord(x2) << "\" y2=\"" << format_coord(y2) << '"';
    style_attrs(style);
    body_ << "/>\n";
}

void Document::polyline(std::span<const double> xy, const Style& style, std::string_view css_class) {
    body_ << "<polyline";
    if (!css_class.empty()) body_ << " class=\"" << css_class << '"';
    body_ << " points=\"";
    for (std::size_t i = 0; i + 1 < xy.size(); i += 2) {
        if (i) body_ << ' ';
        body_ << format_coord(xy[i]) << ',' << format_coord(xy[i + 1]);
    }
    body_ << '"';
    style_attrs(style);
    body_ << "/>\n";
}

void Document::text(double x, double y, std::string_view content, double size, std::string_view anchor) {
    body_ << "<text x=\"" << format_coord(x) << "\" y=\"" << format_coord(y) << "\" font-size=\""
          << format_coord(size) << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">"
          << escape(content) << "</text>\n";
}

void Document::begin_group(std::string_view id) { body_ << "<g id=\"" << escape(id) << "\">\n"; }

void Document::end_group() { body_ << "</g>\n"; }

std::string Document::str() const {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_coord(width_)
       << "\" height=\"" << format_coord(height_) << "\" viewBox=\"0 0 " << format_coord(width_) << ' '
       << format_coord(height_) << "\">\n"
       << body_.str() << "</svg>\n";
    return os.str();
}

}  // namespace flexagg::svg
