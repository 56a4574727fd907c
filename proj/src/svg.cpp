#include "cie/svg.hpp"

#include <cstdio>
#include <stdexcept>

namespace cie::svg {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Writer::Writer(double width, double height) {
    body_ = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
            format_number(width) + "\" height=\"" + format_number(height) +
            "\" viewBox=\"0 0 " + format_number(width) + " " +
            format_number(height) + "\">\n";
}

void Writer::comment(const std::string& text) {
    body_ += "<!-- " + text + " -->\n";
}

void Writer::rect(double x, double y, double w, double h,
                  const std::string& fill, double opacity) {
    body_ += "<rect x=\"" + format_number(x) + "\" y=\"" + format_number(y) +
             "\" width=\"" + format_number(w) + "\" height=\"" +
             format_number(h) + "\" fill=\"" + fill + "\"";
    if (opacity != 1.0) body_ += " fill-opacity=\"" + format_number(opacity) + "\"";
    body_ += "/>\n";
}

void Writer::line(double x1, double y1, double x2, double y2,
                  const std::string& stroke, double stroke_width) {
    body_ += "<line x1=\"" + format_number(x1) + "\" y1=\"" + format_number(y1) +
             "\" x2=\"" + format_number(x2) + "\" y2=\"" + format_number(y2) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             format_number(stroke_width) + "\"/>\n";
}

void Writer::circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "<circle cx=\"" + format_number(cx) + "\" cy=\"" +
             format_number(cy) + "\" r=\"" + format_number(r) + "\" fill=\"" +
             fill + "\"/>\n";
}

void Writer::polyline_begin(const std::string& stroke, double stroke_width) {
    if (in_polyline_) throw std::logic_error("svg: nested polyline");
    in_polyline_ = true;
    first_point_ = true;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke +
             "\" stroke-width=\"" + format_number(stroke_width) +
             "\" points=\"";
}

void Writer::polyline_point(double x, double y) {
    if (!in_polyline_) throw std::logic_error("svg: point outside polyline");
    if (!first_point_) body_ += ' ';
    first_point_ = false;
    body_ += format_number(x) + "," + format_number(y);
}

void Writer::polyline_end() {
    if (!in_polyline_) throw std::logic_error("svg: polyline not begun");
    in_polyline_ = false;
    body_ += "\"/>\n";
}

void Writer::text(double x, double y, const std::string& content,
                  double font_size) {
    body_ += "<text x=\"" + format_number(x) + "\" y=\"" + format_number(y) +
             "\" font-family=\"monospace\" font-size=\"" +
             format_number(font_size) + "\">" + content + "</text>\n";
}

std::string Writer::finish() {
    if (in_polyline_) throw std::logic_error("svg: unterminated polyline");
    return body_ + "</svg>\n";
}

} // namespace cie::svg
