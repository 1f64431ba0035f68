#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamfactor/linform.hpp"
#include "hamfactor/rational.hpp"

namespace hamfactor {

/// Dense matrix of exact rationals, row-major, immutable in spirit:
/// operations return fresh values.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(int rows, int cols);
    static RatMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Rat& operator()(int i, int j) const { return e_[std::size_t(i) * cols_ + j]; }
    Rat& operator()(int i, int j) { return e_[std::size_t(i) * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const RatMatrix& o) const { return !(*this == o); }

    std::string str() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rat> e_;
};

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const Rat& s, const RatMatrix& a);

RatMatrix transpose(const RatMatrix& a);
bool is_zero(const RatMatrix& a);
bool is_symmetric(const RatMatrix& a);
bool is_skew_symmetric(const RatMatrix& a);

/// Writes block b into a at (r0, c0). Throws ShapeError if it does not fit.
void set_block(RatMatrix& a, int r0, int c0, const RatMatrix& b);

/// Scatter a local matrix into global coordinates: a[idx[i]][idx[j]] = b[i][j].
void scatter(RatMatrix& a, const std::vector<int>& idx, const RatMatrix& b);

RatMatrix hstack(const RatMatrix& a, const RatMatrix& b);
RatMatrix vstack(const RatMatrix& a, const RatMatrix& b);

/// Column vector listing the upper triangle (i <= j) of a square matrix.
RatMatrix vectorize_sym(const RatMatrix& a);
/// Column vector of all entries, row-major.
RatMatrix vectorize(const RatMatrix& a);

/// Exact right null space basis via fraction-free elimination; vectors are
/// primitive integer columns with positive leading entry.
std::vector<RatMatrix> kernel_basis(const RatMatrix& a);
RatMatrix kernel_matrix(const RatMatrix& a); // columns = kernel basis, may be m x 0

int rank(const RatMatrix& a);
Rat det(const RatMatrix& a);

/// Some X with a*X = b when b's column space lies in a's; nullopt otherwise.
std::optional<RatMatrix> solve_linear(const RatMatrix& a, const RatMatrix& b);
std::optional<RatMatrix> inverse(const RatMatrix& a);

/// Exact membership of m in the span of the given matrices (all same shape).
bool in_span(const std::vector<RatMatrix>& basis, const RatMatrix& m);

/// Rank of the set of equally-shaped matrices viewed as vectors.
int span_rank(const std::vector<RatMatrix>& mats);

RatMatrix random_matrix(RatRng& rng, int rows, int cols, int num_range = 9, int den_range = 9);
RatMatrix random_vector(RatRng& rng, int n, int num_range = 9, int den_range = 9);
RatMatrix random_invertible(RatRng& rng, int n);

/// Matrix whose entries are affine-linear forms in named parameters.
class ParamMatrix {
public:
    ParamMatrix() = default;
    ParamMatrix(int rows, int cols);
    static ParamMatrix from_constant(const RatMatrix& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const LinForm& operator()(int i, int j) const { return e_[std::size_t(i) * cols_ + j]; }
    LinForm& operator()(int i, int j) { return e_[std::size_t(i) * cols_ + j]; }

    /// Sorted union of parameter names over all entries.
    std::vector<std::string> params() const;

    bool operator==(const ParamMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const ParamMatrix& o) const { return !(*this == o); }

    std::string str() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<LinForm> e_;
};

ParamMatrix operator+(const ParamMatrix& a, const ParamMatrix& b);
ParamMatrix operator*(const ParamMatrix& a, const RatMatrix& b);
ParamMatrix operator*(const RatMatrix& a, const ParamMatrix& b);
ParamMatrix operator*(const Rat& s, const ParamMatrix& a);
ParamMatrix transpose(const ParamMatrix& a);
bool is_zero(const ParamMatrix& a);
bool is_symmetric(const ParamMatrix& a);
bool column_is_zero(const ParamMatrix& a, int j);

void scatter(ParamMatrix& a, const std::vector<int>& idx, const ParamMatrix& b);

/// Full evaluation. Every parameter of the matrix must be covered and every
/// assignment key must name a parameter of the matrix; InputError otherwise.
RatMatrix substitute(const ParamMatrix& a, const Assignment& values);

/// Partial evaluation; result keeps the remaining parameters. Unknown keys
/// are an InputError.
ParamMatrix substitute_partial(const ParamMatrix& a, const Assignment& values);

/// Matrix of coefficients of one parameter.
RatMatrix coefficient_matrix(const ParamMatrix& a, const std::string& name);
RatMatrix constant_matrix(const ParamMatrix& a);

ParamMatrix with_prefix(const ParamMatrix& a, const std::string& prefix);

} // namespace hamfactor
