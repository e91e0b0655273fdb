#pragma once

#include <map>
#include <string>
#include <vector>

#include "wkam/grid.hpp"

namespace wkam {

// Versioned binary container for dense grid-pair tables (kernels, barriers,
// powers).  Little-endian, doubles row-major; named scalar metadata.
struct TableFile {
    SpatialGrid grid;
    CohomologyClass c;
    int substeps = 0;
    std::vector<double> table;
    std::map<std::string, double> extra;
};

void write_table(const std::string& path, const TableFile& file);
TableFile read_table(const std::string& path);

void write_grid_function(const std::string& path, const GridFunction& u,
                         const std::map<std::string, double>& extra = {});
GridFunction read_grid_function(const std::string& path,
                                std::map<std::string, double>* extra = nullptr);

// CSV with a header row; each row joined with commas, full double precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// FNV-1a of the canonical config text; stable across runs and platforms.
std::string config_hash(const std::string& canonical_text);

}  // namespace wkam
