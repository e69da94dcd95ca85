#pragma once

#include <filesystem>
#include <string>

#include "pbed/grid.hpp"

namespace pbed {

/// Read a density field from CSV. Layout: the first cell of the header row is
/// empty and the rest are time points; every following row starts with the x
/// value and carries n(x_i, t_m) for each time column. Failures raise
/// ParseError with a kind identifying the defect.
DensityField load_density(const std::filesystem::path& path);

/// Write the CSV counterpart of load_density with 17 significant digits so a
/// write-then-read round trip is bit exact.
void save_density(const DensityField& field, const std::filesystem::path& path);

/// Optional JSON sidecar with provenance and generation metadata; written
/// next to the CSV as <stem>.meta.json.
void save_density_sidecar(const DensityField& field, const std::filesystem::path& csv_path,
                          const std::string& generator_info);

}  // namespace pbed
