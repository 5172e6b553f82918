#include "ecgsyn/plot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ecgsyn {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kMargin = 40.0;

std::string polyline(const std::vector<double>& values, double lo, double hi,
                     const std::string& color) {
    std::ostringstream out;
    out.precision(6);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    const double span = hi > lo ? hi - lo : 1.0;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x =
            kMargin + (kWidth - 2 * kMargin) * static_cast<double>(i) /
                          static_cast<double>(n > 1 ? n - 1 : 1);
        const double y =
            kHeight - kMargin - (kHeight - 2 * kMargin) * (values[i] - lo) / span;
        out << x << ',' << y << ' ';
    }
    out << "\"/>\n";
    return out.str();
}

void write_svg(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body << "</svg>\n";
    if (!out) throw Error("Io", "write failed: " + path);
}

} // namespace

void write_beat_svg(const Beat& beat, const std::string& path,
                    const std::string& annotation) {
    if (beat.empty()) throw Error("EmptyBeat", "write_beat_svg");
    const auto [lo_it, hi_it] = std::minmax_element(beat.begin(), beat.end());
    std::string body = polyline(beat, *lo_it, *hi_it, "#0057b8");
    if (!annotation.empty()) {
        body += "<text x=\"" + std::to_string(kMargin) + "\" y=\"24\" font-size=\"14\" "
                "font-family=\"monospace\">" + annotation + "</text>\n";
    }
    write_svg(path, body);
}

void write_beat_csv(const Beat& beat, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out.precision(17);
    for (std::size_t i = 0; i < beat.size(); ++i) out << i << ',' << beat[i] << '\n';
}

void write_epoch_curve_svg(const EpochCurve& curve, const std::string& path) {
    if (curve.points.empty()) throw Error("EmptySet", "write_epoch_curve_svg");
    std::vector<double> s2d, s2f, s2e, gl, dl;
    for (const auto& p : curve.points) {
        s2d.push_back(p.s2_dtw);
        s2f.push_back(p.s2_frechet);
        s2e.push_back(p.s2_euclid);
        gl.push_back(p.generator_loss);
        dl.push_back(p.discriminator_loss);
    }
    double lo = s2d[0], hi = s2d[0];
    for (const auto* series : {&s2d, &s2f, &s2e, &gl, &dl}) {
        for (double v : *series) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    std::string body;
    body += polyline(s2d, lo, hi, "#0057b8");
    body += polyline(s2f, lo, hi, "#b80000");
    body += polyline(s2e, lo, hi, "#00882a");
    body += polyline(gl, lo, hi, "#888888");
    body += polyline(dl, lo, hi, "#cc8800");
    body += "<text x=\"40\" y=\"24\" font-size=\"12\" font-family=\"monospace\">"
            "s2_dtw(blue) s2_frechet(red) s2_euclid(green) g_loss(gray) d_loss(orange)"
            "</text>\n";
    write_svg(path, body);
}

void write_epoch_curve_csv(const EpochCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("Io", "cannot open for writing: " + path);
    out << curve.to_csv();
    if (!out) throw Error("Io", "write failed: " + path);
}

} // namespace ecgsyn
