#pragma once

#include <iosfwd>
#include <string>

#include "simlab/types.hpp"

namespace simlab::io {

/// Shared matrix text format: first line "rows cols", then one line per row
/// with cols tokens "re:im". Floats carry 17 significant digits so that
/// write/read round-trips are exact at token level.

std::string format_double(double x);

Matrix read_matrix(std::istream& in, const std::string& origin = "<stream>");
Matrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

}  // namespace simlab::io
