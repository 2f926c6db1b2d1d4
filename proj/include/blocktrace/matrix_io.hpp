#pragma once

#include <string>

#include "blocktrace/blockops.hpp"

namespace blocktrace {

// On-disk format: {"m": int, "n": int, "data": [[re, im], ...]} with the
// (mn)^2 entries row-major. Doubles round-trip losslessly.
void save_matrix(const std::string& path, const BlockMatrix& a);
BlockMatrix load_matrix(const std::string& path);

}  // namespace blocktrace
