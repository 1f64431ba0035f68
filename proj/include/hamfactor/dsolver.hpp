#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hamfactor/jordan.hpp"
#include "hamfactor/matrix.hpp"

namespace hamfactor {

/// The complete family of symmetric D with D*B skew-symmetric, as a
/// parametric matrix plus the basis matrix per parameter.
struct DFamily {
    ParamMatrix general;
    std::vector<std::pair<std::string, RatMatrix>> basis; // ordered by parameter name
    int dim = 0;
};

/// Basis extraction shared by the closed form and the oracles.
DFamily family_from_parametric(ParamMatrix general);

/// Per-group closed forms. Size lists may contain 1s (non-degenerate
/// eigenvalues); they are sorted ascending internally. Parameters are named
/// d_<i>_<j> / alpha_<i>_<j> / beta_<i>_<j> after the defining slot, in
/// group-local (cell) coordinates, with the given prefix prepended.
ParamMatrix build_zero_block(std::vector<int> sizes, const std::string& prefix = "");
ParamMatrix build_real_pair_block(const Rat& lambda, std::vector<int> sizes_plus,
                                  std::vector<int> sizes_minus, const std::string& prefix = "");
ParamMatrix build_imaginary_block(const Rat& b, std::vector<int> sizes,
                                  const std::string& prefix = "");
ParamMatrix build_complex_block(const Rat& a, const Rat& b, std::vector<int> sizes_plus,
                                std::vector<int> sizes_minus, const std::string& prefix = "");

/// Closed-form family for the full canonical matrix of the spec: block
/// diagonal over groups, zero across groups. Symmetry and skewness of
/// general*B are verified symbolically before returning.
DFamily solve_family(const JordanSpec& spec);

/// Independent check: solves {D symmetric, D*B + B^t*D = 0} by vectorizing
/// the upper triangle of D and computing an exact kernel basis. Parameters
/// are auto-named q0, q1, ...
DFamily oracle_family(const RatMatrix& b);

} // namespace hamfactor
