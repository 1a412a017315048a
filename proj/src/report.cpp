#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "io.hpp"

namespace tsc {

namespace {

void check_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") != std::string::npos)
        fail_format("CSV field may not contain commas, quotes, or newlines: '" + value + "'");
}

void check_row(const ResultRow& row) {
    check_field(row.dataset);
    check_field(row.method);
    check_field(row.regime);
    if (!std::isfinite(row.kept_fraction) || !std::isfinite(row.mse))
        fail_numeric("non-finite value in result row for '" + row.dataset + "'");
}

}  // namespace

std::vector<ResultRow> result_rows(std::span<const CompressionResult> results) {
    std::vector<ResultRow> rows;
    rows.reserve(results.size());
    for (const auto& r : results)
        rows.push_back({r.dataset_id, to_string(r.method), r.kept_fraction, r.mse, ""});
    return rows;
}

std::vector<ResultRow> result_rows(const std::string& dataset_id,
                                   std::span<const NoiseExperimentResult> results) {
    std::vector<ResultRow> rows;
    rows.reserve(results.size());
    for (const auto& r : results)
        rows.push_back(
            {dataset_id, to_string(Method::Vae), r.kept_fraction, r.mse, to_string(r.regime)});
    return rows;
}

std::vector<ResultRow> reference_rows() {
    std::vector<ResultRow> rows;
    for (const auto& e : reference_compression_table())
        rows.push_back({std::string(e.dataset) + "-reference", to_string(e.method),
                        e.kept_fraction, e.mse, ""});
    return rows;
}

std::string results_csv(std::span<const ResultRow> rows) {
    if (rows.empty()) fail_invalid("no result rows to write");
    std::string out = "dataset,method,kept_fraction,mse,regime\n";
    for (const auto& row : rows) {
        check_row(row);
        out += row.dataset;
        out += ',';
        out += row.method;
        out += ',';
        out += format_double(row.kept_fraction);
        out += ',';
        out += format_double(row.mse);
        out += ',';
        out += row.regime;
        out += '\n';
    }
    return out;
}

std::string confusion_csv(std::span<const DetectorResult> detectors) {
    if (detectors.empty()) fail_invalid("no detector rows to write");
    std::string out = "detector,tp,fp,tn,fn,balanced_accuracy\n";
    for (const auto& d : detectors) {
        check_field(d.detector);
        out += d.detector;
        out += ',';
        out += std::to_string(d.confusion.tp);
        out += ',';
        out += std::to_string(d.confusion.fp);
        out += ',';
        out += std::to_string(d.confusion.tn);
        out += ',';
        out += std::to_string(d.confusion.fn);
        out += ',';
        out += format_double(d.confusion.balanced_accuracy());
        out += '\n';
    }
    return out;
}

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

std::string xml_escape(const std::string& text) {
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

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* series_color(size_t index) {
    static const char* const kPalette[] = {"#4c72b0", "#dd8452", "#55a868",
                                           "#c44e52", "#8172b3", "#937860"};
    return kPalette[index % (sizeof kPalette / sizeof kPalette[0])];
}

constexpr double kPlotFloor = 1e-16;  // log-axis stand-in for exact zeros

}  // namespace

std::string sweep_svg(std::span<const ResultRow> rows) {
    if (rows.empty()) fail_invalid("no result rows to plot");

    bool multiple_datasets = std::any_of(rows.begin(), rows.end(), [&](const ResultRow& row) {
        return row.dataset != rows[0].dataset;
    });

    std::vector<Series> series;
    for (const auto& row : rows) {
        check_row(row);
        std::string label = row.regime.empty() ? row.method : row.method + " " + row.regime;
        if (multiple_datasets) label = row.dataset + " " + label;
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.label == label; });
        if (it == series.end()) {
            series.push_back({std::move(label), {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(row.kept_fraction, row.mse);
    }
    for (auto& s : series) std::sort(s.points.begin(), s.points.end());

    double xmin = series[0].points[0].first, xmax = xmin;
    double lymin = 0.0, lymax = 0.0;
    bool first = true;
    std::vector<double> xticks;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            double ly = std::log10(std::max(y, kPlotFloor));
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            lymin = first ? ly : std::min(lymin, ly);
            lymax = first ? ly : std::max(lymax, ly);
            first = false;
            xticks.push_back(x);
        }
    std::sort(xticks.begin(), xticks.end());
    xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
    if (xmax == xmin) {
        xmin -= 0.01;
        xmax += 0.01;
    }
    int dlo = int(std::floor(lymin));
    int dhi = int(std::ceil(lymax));
    if (dhi == dlo) ++dhi;

    constexpr double kLeft = 70.0, kRight = 590.0, kTop = 24.0, kBottom = 430.0;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
    auto sy = [&](double ly) {
        return kBottom - (ly - dlo) / double(dhi - dlo) * (kBottom - kTop);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"480\" "
           "viewBox=\"0 0 760 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"760\" height=\"480\" fill=\"#ffffff\"/>\n";

    for (int d = dlo; d <= dhi; ++d) {
        std::string y = coord(sy(d));
        svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + y + "\" x2=\"" + coord(kRight) +
               "\" y2=\"" + y + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + coord(kLeft - 8) + "\" y=\"" + coord(sy(d) + 4) +
               "\" text-anchor=\"end\">1e" + std::to_string(d) + "</text>\n";
    }
    for (double x : xticks) {
        std::string sxv = coord(sx(x));
        svg += "<line x1=\"" + sxv + "\" y1=\"" + coord(kBottom) + "\" x2=\"" + sxv + "\" y2=\"" +
               coord(kBottom + 5) + "\" stroke=\"#000000\"/>\n";
        char label[32];
        std::snprintf(label, sizeof label, "%g%%", x * 100.0);
        svg += "<text x=\"" + sxv + "\" y=\"" + coord(kBottom + 20) +
               "\" text-anchor=\"middle\">" + label + "</text>\n";
    }
    svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop) + "\" x2=\"" + coord(kLeft) +
           "\" y2=\"" + coord(kBottom) + "\" stroke=\"#000000\"/>\n";
    svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kBottom) + "\" x2=\"" +
           coord(kRight) + "\" y2=\"" + coord(kBottom) + "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + coord((kLeft + kRight) / 2) + "\" y=\"" + coord(kBottom + 40) +
           "\" text-anchor=\"middle\">kept fraction</text>\n";
    svg += "<text x=\"18\" y=\"" + coord((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           coord((kTop + kBottom) / 2) + ")\">MSE</text>\n";

    for (size_t i = 0; i < series.size(); ++i) {
        const char* color = series_color(i);
        std::string points;
        for (auto [x, y] : series[i].points) {
            if (!points.empty()) points += ' ';
            points += coord(sx(x)) + "," + coord(sy(std::log10(std::max(y, kPlotFloor))));
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";

        double ly = kTop + 16.0 * double(i);
        svg += "<line x1=\"604\" y1=\"" + coord(ly) + "\" x2=\"628\" y2=\"" + coord(ly) +
               "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"634\" y=\"" + coord(ly + 4) + "\">" + xml_escape(series[i].label) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    write_file_atomic(path, results_csv(rows));
}

void write_confusion_csv(const std::filesystem::path& path,
                         std::span<const DetectorResult> detectors) {
    write_file_atomic(path, confusion_csv(detectors));
}

void write_sweep_svg(const std::filesystem::path& path, std::span<const ResultRow> rows) {
    write_file_atomic(path, sweep_svg(rows));
}

}  // namespace tsc
