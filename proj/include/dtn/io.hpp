#pragma once

// Artifact writers: CSV tables with JSON schema sidecars, atomic text writes,
// and small static SVG plots. Everything here is deterministic for fixed
// inputs; timestamps never enter these files.

#include <filesystem>
#include <string>
#include <vector>

namespace dtn::io {

struct CsvColumn {
    std::string name;
    std::string description;
};

// Header row + one line per row, values printed with %.17g so reruns are
// byte-identical. Also writes <file>.json describing the columns.
void write_csv(const std::filesystem::path& file, const std::vector<CsvColumn>& columns,
               const std::vector<std::vector<double>>& rows);

// Write to <file>.tmp in the same directory, then rename over the target.
void write_text_atomic(const std::filesystem::path& file, const std::string& content);

// Eigenvalue staircase: index on x, eigenvalue on y, drawn as steps.
std::string svg_staircase(const std::vector<double>& values, const std::string& title);

// One or more (x, y) series on log-log axes; series must be positive.
struct Series {
    std::string label;
    std::vector<double> x, y;
};
std::string svg_loglog(const std::vector<Series>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel);

// Single series on linear axes.
std::string svg_curve(const std::vector<double>& x, const std::vector<double>& y,
                      const std::string& title, const std::string& xlabel,
                      const std::string& ylabel);

}  // namespace dtn::io
