#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "bglab/balance.hpp"
#include "bglab/histogram.hpp"
#include "bglab/io/manifest.hpp"
#include "bglab/pair_correlation.hpp"
#include "bglab/sweep.hpp"

namespace bglab::io {

nlohmann::ordered_json to_json(const BalanceReport& r);
nlohmann::ordered_json balance_summary_json(const BalanceReport& r);  // norms only, no per-cell data
nlohmann::ordered_json to_json(const SweepSpec& s);
nlohmann::ordered_json to_json(const ExponentFit& f);
nlohmann::ordered_json to_json(const SweepReport& r);
nlohmann::ordered_json to_json(const PairHistogram& g);
nlohmann::ordered_json to_json(const AfcResult& a);
nlohmann::ordered_json grid_json(const GridSpec& g);
nlohmann::ordered_json to_json(const CollisionField& c);

std::string summary_text(const BalanceReport& r);
std::string summary_text(const SweepReport& r);

/// Header plus one row per scaling point.
std::string sweep_points_csv(const SweepReport& r);
std::string sweep_successive_csv(const SweepReport& r);
/// Header plus one row per comparison cell.
std::string balance_cells_csv(const BalanceReport& r);
/// Raw counts of the non-empty cells: cell, spatial and velocity centers,
/// weight, hits, weight_sq, density, standard error.
std::string histogram_csv(const PhaseHistogram& h);
/// Sidecar for a histogram table: grid spec, normalization and counts.
nlohmann::ordered_json histogram_header_json(const PhaseHistogram& h, const std::string& table);
std::string pair_correlation_csv(const PairHistogram& g);

/// Writes <stem>.json, <stem>.txt and the CSV tables; returns the relative
/// names written.
std::vector<std::string> emit_report(const SweepReport& r, const OutputDir& dir, const std::string& stem = "sweep");
std::vector<std::string> emit_report(const BalanceReport& r, const OutputDir& dir, const std::string& stem = "balance");

}  // namespace bglab::io
