#pragma once

#include <filesystem>
#include <string>

#include "grfkit/experiment.hpp"

namespace grfkit::cli {

/// SVG 1.1 chart of mean relative Frobenius error against walker count:
/// one chart per graph id, one polyline and one +/-1 std band polygon per
/// coupling. Byte-identical output for identical summaries.
std::string render_svg(const ExperimentReport& report);

/// Writes render_svg(report) to `path`. Throws grfkit::Error if the report
/// is empty or the file cannot be written.
void emit_plot(const ExperimentReport& report, const std::filesystem::path& path);

}  // namespace grfkit::cli
