#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rkde/mc.hpp"

namespace rkde {

/// Published coverage (fraction, not percent) and average interval length
/// for one a-block of a reference table.  Cells are x-major, n-minor:
/// index = 3 * x_index + n_index with n in {50, 100, 200}.
struct ReferenceBlock {
  double a;
  std::array<double, 9> rosenblatt_level;
  std::array<double, 9> rosenblatt_length;
  std::array<double, 9> recursive_level;
  std::array<double, 9> recursive_length;
};

const std::vector<ReferenceBlock>& reference_table(int table_id);

struct ReferenceCell {
  double level;
  double length;
};

/// Looks up the published value matching a simulated row.
ReferenceCell reference_cell(const TableRow& row);

}  // namespace rkde
