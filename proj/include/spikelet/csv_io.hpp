#pragma once

#include <string>
#include <vector>

#include "spikelet/signal.hpp"

namespace spikelet {

// Single-column numeric CSV (optional non-numeric header line, one value per
// row; a trailing comment after the value is not supported).
Signal readCsvSignal(const std::string& path, double dt);

void writeCsvSignal(const std::string& path, const Signal& s);

// Table writer: one header row then data rows, all comma separated.
void writeCsvTable(const std::string& path, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

} // namespace spikelet
