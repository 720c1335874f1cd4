#include "dtn/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dtn/error.hpp"

namespace dtn::io {
namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string px(double v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

// Plot frame: fixed canvas, margins, data-to-pixel affine maps.
constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 50;

struct Frame {
    double x0, x1, y0, y1;

    double X(double x) const { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); }
    double Y(double y) const { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); }
};

Frame padded_frame(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    return {x0, x1, y0, y1};
}

const char* kPalette[4] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad"};

void svg_open(std::ostringstream& s, const std::string& title) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"15\">" << escape_xml(title) << "</text>\n";
}

void svg_axes(std::ostringstream& s, const Frame& fr, const std::string& xlabel,
              const std::string& ylabel) {
    s << "<rect x=\"" << px(kL) << "\" y=\"" << px(kT) << "\" width=\"" << px(kW - kL - kR)
      << "\" height=\"" << px(kH - kT - kB)
      << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    s << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape_xml(xlabel) << "</text>\n";
    s << "<text x=\"16\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
      << " transform=\"rotate(-90 16 " << kH / 2 << ")\">" << escape_xml(ylabel) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = fr.x0 + (fr.x1 - fr.x0) * i / 4.0;
        double fy = fr.y0 + (fr.y1 - fr.y0) * i / 4.0;
        char lx[32], ly[32];
        std::snprintf(lx, sizeof(lx), "%.3g", fx);
        std::snprintf(ly, sizeof(ly), "%.3g", fy);
        s << "<text x=\"" << px(fr.X(fx)) << "\" y=\"" << px(kH - kB + 16)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << lx
          << "</text>\n";
        s << "<text x=\"" << px(kL - 6) << "\" y=\"" << px(fr.Y(fy) + 3)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << ly
          << "</text>\n";
    }
}

void svg_polyline(std::ostringstream& s, const Frame& fr, const std::vector<double>& x,
                  const std::vector<double>& y, const char* color) {
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < x.size(); ++i)
        s << px(fr.X(x[i])) << "," << px(fr.Y(y[i])) << " ";
    s << "\"/>\n";
}

}  // namespace

void write_text_atomic(const std::filesystem::path& file, const std::string& content) {
    const auto tmp = file.parent_path() / (file.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::config, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error(ErrorKind::config, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

void write_csv(const std::filesystem::path& file, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream body;
    for (size_t j = 0; j < columns.size(); ++j)
        body << columns[j].name << (j + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw Error(ErrorKind::config, "csv row width mismatch in " + file.string());
        for (size_t j = 0; j < row.size(); ++j)
            body << num(row[j]) << (j + 1 < row.size() ? "," : "\n");
    }
    write_text_atomic(file, body.str());

    nlohmann::json schema;
    schema["file"] = file.filename().string();
    schema["rows"] = rows.size();
    schema["columns"] = nlohmann::json::array();
    for (const auto& c : columns)
        schema["columns"].push_back({{"name", c.name}, {"description", c.description}});
    write_text_atomic(file.string() + ".json", schema.dump(2) + "\n");
}

std::string svg_staircase(const std::vector<double>& values, const std::string& title) {
    std::ostringstream s;
    svg_open(s, title);
    if (!values.empty()) {
        double lo = values.front(), hi = values.front();
        for (double v : values) { lo = std::min(lo, v); hi = std::max(hi, v); }
        Frame fr = padded_frame(0, static_cast<double>(values.size()), lo, hi);
        svg_axes(s, fr, "index", "eigenvalue");
        std::vector<double> xs, ys;
        for (size_t i = 0; i < values.size(); ++i) {
            xs.push_back(static_cast<double>(i));
            ys.push_back(values[i]);
            xs.push_back(static_cast<double>(i + 1));
            ys.push_back(values[i]);
        }
        svg_polyline(s, fr, xs, ys, kPalette[0]);
    }
    s << "</svg>\n";
    return s.str();
}

std::string svg_loglog(const std::vector<Series>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel) {
    std::ostringstream s;
    svg_open(s, title);
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool any = false;
    std::vector<Series> logs;
    for (const auto& ser : series) {
        Series ls{ser.label, {}, {}};
        for (size_t i = 0; i < ser.x.size(); ++i) {
            if (!(ser.x[i] > 0.0) || !(ser.y[i] > 0.0)) continue;  // off the log chart
            double lx = std::log10(ser.x[i]), ly = std::log10(ser.y[i]);
            ls.x.push_back(lx);
            ls.y.push_back(ly);
            if (!any) { x0 = x1 = lx; y0 = y1 = ly; any = true; }
            x0 = std::min(x0, lx); x1 = std::max(x1, lx);
            y0 = std::min(y0, ly); y1 = std::max(y1, ly);
        }
        logs.push_back(std::move(ls));
    }
    if (any) {
        Frame fr = padded_frame(x0, x1, y0, y1);
        svg_axes(s, fr, "log10 " + xlabel, "log10 " + ylabel);
        for (size_t k = 0; k < logs.size(); ++k) {
            const char* color = kPalette[k % 4];
            svg_polyline(s, fr, logs[k].x, logs[k].y, color);
            s << "<text x=\"" << px(kW - kR - 8) << "\" y=\"" << px(kT + 16 + 14 * k)
              << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
              << color << "\">" << escape_xml(logs[k].label) << "</text>\n";
        }
    }
    s << "</svg>\n";
    return s.str();
}

std::string svg_curve(const std::vector<double>& x, const std::vector<double>& y,
                      const std::string& title, const std::string& xlabel,
                      const std::string& ylabel) {
    std::ostringstream s;
    svg_open(s, title);
    if (!x.empty() && x.size() == y.size()) {
        double x0 = x[0], x1 = x[0], y0 = y[0], y1 = y[0];
        for (size_t i = 0; i < x.size(); ++i) {
            x0 = std::min(x0, x[i]); x1 = std::max(x1, x[i]);
            y0 = std::min(y0, y[i]); y1 = std::max(y1, y[i]);
        }
        Frame fr = padded_frame(x0, x1, y0, y1);
        svg_axes(s, fr, xlabel, ylabel);
        svg_polyline(s, fr, x, y, kPalette[0]);
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace dtn::io
