#pragma once

#include <string>
#include <vector>

#include "espde/scenario.hpp"

namespace espde {

/// One row per recorded sample; fixed shortest-round-trip formatting so that identical
/// runs produce byte-identical files.
void write_csv(const ScenarioResult& result, const std::string& path);

/// Resolved configuration, derived quantities and run metadata as a key: value text file.
void write_manifest(const ScenarioResult& result, const std::string& path);

/// Stability report and convergence metrics.
void write_report(const ScenarioResult& result, const std::string& path);

/// Signals suitable for charting: theta, Theta, y, G, Hhat, U.
std::vector<std::string> chart_signals();

/// Self-contained SVG line chart of one signal, one polyline per player.
void write_svg(const ScenarioResult& result, const std::string& signal, const std::string& path);

/// Writes csv + manifest + report (+ per-signal SVGs when requested) under
/// dir/<name>.csv etc. and returns the written paths.
std::vector<std::string> export_result(const ScenarioResult& result, const std::string& dir,
                                       bool with_svg);

} // namespace espde
