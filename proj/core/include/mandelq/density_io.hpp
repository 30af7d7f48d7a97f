#pragma once

#include <string>
#include <string_view>

#include "mandelq/types.hpp"

namespace mandelq {

/// Parses the explicit density-matrix text format:
///
///   n_max <integer>
///   rho
///   <re> <im>   ... (n_max+1)^4 pairs, row-major over index(n1,n2)
///
/// Whitespace is free-form; '#' starts a comment through end of line; the
/// decorations '=', ',', '[', ']', '(' and ')' are ignored, so bracketed pair
/// lists parse as well. Throws ParseError on malformed text and
/// ValidationError when the matrix violates hermiticity (1e-10), unit trace
/// (1e-8) or positivity (eigenvalues >= -1e-8); messages name the violated
/// invariant and the worst offending entry.
ExplicitDensityMatrix parse_density_text(std::string_view text);
ExplicitDensityMatrix read_density_file(const std::string& path);

std::string format_density_text(const ExplicitDensityMatrix& density);
void write_density_file(const std::string& path, const ExplicitDensityMatrix& density);

/// The invariant checks used by the parser, for directly constructed matrices.
void validate_density(const CMatrix& rho, const Cutoff& cutoff);

}  // namespace mandelq
