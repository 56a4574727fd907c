#pragma once

#include <string>

// Minimal deterministic SVG writer. Textual output with fixed number
// formatting so plots can be golden-file diffed.

namespace cie::svg {

class Writer {
public:
    Writer(double width, double height);

    void comment(const std::string& text);
    void rect(double x, double y, double w, double h, const std::string& fill,
              double opacity = 1.0);
    void line(double x1, double y1, double x2, double y2,
              const std::string& stroke, double stroke_width = 1.0);
    void circle(double cx, double cy, double r, const std::string& fill);
    void polyline_begin(const std::string& stroke, double stroke_width);
    void polyline_point(double x, double y);
    void polyline_end();
    void text(double x, double y, const std::string& content,
              double font_size = 12.0);

    std::string finish();

private:
    std::string body_;
    bool in_polyline_ = false;
    bool first_point_ = false;
};

std::string format_number(double v);

} // namespace cie::svg
