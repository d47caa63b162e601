#pragma once

#include <string>
#include <vector>

#include "twoseq/harness.hpp"

namespace twoseq {

/// Static SVG line chart of log10(mse) against log10(n), one polyline per
/// (estimator, beta, epsilon, a, b) series. Rows with mse <= 0 are skipped.
std::string render_mse_svg(const std::vector<SimRow>& rows, const std::string& title = "");

}  // namespace twoseq
