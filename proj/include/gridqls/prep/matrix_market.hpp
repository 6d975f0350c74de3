#pragma once

#include <filesystem>
#include <iosfwd>

#include "gridqls/types.hpp"

namespace gridqls::prep {

// MatrixMarket subset read and written here:
//
//   %%MatrixMarket matrix <coordinate|array> <real|integer|complex> <general|symmetric|hermitian|skew-symmetric>
//   % comment lines
//   <rows> <cols> [<nnz>]            (nnz only for coordinate)
//   coordinate: <i> <j> <re> [<im>]  1-based, one entry per line
//   array:      <re> [<im>]          column-major, one entry per line
//
// For symmetric/hermitian/skew-symmetric files only the lower triangle is
// stored (array format: column-major lower triangle incl. diagonal; none on
// the diagonal for skew-symmetric). A vector is an n x 1 matrix.

/// Throws gridqls::ParseError with the offending line number.
CMatrix read_matrix_market(std::istream &in);
CMatrix read_matrix_market(const std::filesystem::path &path);

/// Read an n x 1 (or 1 x n) matrix as a vector.
CVector read_vector_market(const std::filesystem::path &path);

/// Writes `array ... general` when dense is true, else `coordinate general`.
/// The field is real when every imaginary part is zero.
void write_matrix_market(std::ostream &out, const CMatrix &matrix, bool dense = false);
void write_matrix_market(const std::filesystem::path &path, const CMatrix &matrix, bool dense = false);

} // namespace gridqls::prep
