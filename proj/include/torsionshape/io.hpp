#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "torsionshape/domain.hpp"
#include "torsionshape/torsion.hpp"

namespace tshape::io {

/// Grid dump: first line "nx,ny,x0,y0,x1,y1" with the values, then ny + 1
/// rows of nx + 1 node values (row j = 0 first).
std::string grid_csv(const NodeField& f);
NodeField parse_grid_csv(const std::string& text);

/// Rows x,y,nx,ny,ds under a header line.
std::string boundary_csv(const std::vector<BoundarySample>& samples);

Domain load_domain_csv(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace tshape::io
