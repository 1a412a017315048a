#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bench.hpp"

namespace tsc {

// One line of the results CSV; regime is empty for compression rows.
struct ResultRow {
    std::string dataset;
    std::string method;
    double kept_fraction = 0.0;
    double mse = 0.0;
    std::string regime;
};

std::vector<ResultRow> result_rows(std::span<const CompressionResult> results);
std::vector<ResultRow> result_rows(const std::string& dataset_id,
                                   std::span<const NoiseExperimentResult> results);
// Reference comparison rows; dataset ids get a "-reference" suffix.
std::vector<ResultRow> reference_rows();

std::string results_csv(std::span<const ResultRow> rows);

struct DetectorResult {
    std::string detector;
    ConfusionMatrix confusion;
};

std::string confusion_csv(std::span<const DetectorResult> detectors);

// Line chart of mse over kept_fraction, log-scale y, one polyline per series
// (method, plus regime when set). Self-contained SVG.
std::string sweep_svg(std::span<const ResultRow> rows);

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);
void write_confusion_csv(const std::filesystem::path& path,
                         std::span<const DetectorResult> detectors);
void write_sweep_svg(const std::filesystem::path& path, std::span<const ResultRow> rows);

}  // namespace tsc
