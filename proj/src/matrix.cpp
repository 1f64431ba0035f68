#include "hamfactor/matrix.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hamfactor/errors.hpp"

namespace hamfactor {

RatMatrix::RatMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw ShapeError("negative matrix dimension");
    e_.assign(std::size_t(rows) * cols, Rat(0));
}

RatMatrix RatMatrix::identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

std::string RatMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j)
            os << (j ? " " : "") << rat_str((*this)(i, j));
        os << "]\n";
    }
    return os.str();
}

namespace {

void require_same_shape(const RatMatrix& a, const RatMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError(std::string(op) + ": shape mismatch");
}

} // namespace

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    require_same_shape(a, b, "add");
    RatMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j) + b(i, j);
    return r;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    require_same_shape(a, b, "sub");
    RatMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j) - b(i, j);
    return r;
}

RatMatrix operator-(const RatMatrix& a) {
    RatMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = -a(i, j);
    return r;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError("mul: inner dimensions differ");
    RatMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Rat& aik = a(i, k);
            if (aik == 0)
                continue;
            for (int j = 0; j < b.cols(); ++j) {
                if (b(k, j) == 0)
                    continue;
                r(i, j) += aik * b(k, j);
            }
        }
    return r;
}

RatMatrix operator*(const Rat& s, const RatMatrix& a) {
    RatMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = s * a(i, j);
    return r;
}

RatMatrix transpose(const RatMatrix& a) {
    RatMatrix r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(j, i) = a(i, j);
    return r;
}

bool is_zero(const RatMatrix& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0)
                return false;
    return true;
}

bool is_symmetric(const RatMatrix& a) {
    if (a.rows() != a.cols())
        return false;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != a(j, i))
                return false;
    return true;
}

bool is_skew_symmetric(const RatMatrix& a) {
    if (a.rows() != a.cols())
        return false;
    for (int i = 0; i < a.rows(); ++i) {
        if (a(i, i) != 0)
            return false;
        for (int j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != -a(j, i))
                return false;
    }
    return true;
}

void set_block(RatMatrix& a, int r0, int c0, const RatMatrix& b) {
    if (r0 < 0 || c0 < 0 || r0 + b.rows() > a.rows() || c0 + b.cols() > a.cols())
        throw ShapeError("set_block: block does not fit");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            a(r0 + i, c0 + j) = b(i, j);
}

void scatter(RatMatrix& a, const std::vector<int>& idx, const RatMatrix& b) {
    if (int(idx.size()) != b.rows() || b.rows() != b.cols())
        throw ShapeError("scatter: index list must match square block");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            a(idx[i], idx[j]) = b(i, j);
}

RatMatrix hstack(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows())
        throw ShapeError("hstack: row counts differ");
    RatMatrix r(a.rows(), a.cols() + b.cols());
    set_block(r, 0, 0, a);
    set_block(r, 0, a.cols(), b);
    return r;
}

RatMatrix vstack(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.cols())
        throw ShapeError("vstack: column counts differ");
    RatMatrix r(a.rows() + b.rows(), a.cols());
    set_block(r, 0, 0, a);
    set_block(r, a.rows(), 0, b);
    return r;
}

RatMatrix vectorize_sym(const RatMatrix& a) {
    if (a.rows() != a.cols())
        throw ShapeError("vectorize_sym: matrix not square");
    const int n = a.rows();
    RatMatrix v(n * (n + 1) / 2, 1);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            v(k++, 0) = a(i, j);
    return v;
}

RatMatrix vectorize(const RatMatrix& a) {
    RatMatrix v(a.rows() * a.cols(), 1);
    int k = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            v(k++, 0) = a(i, j);
    return v;
}

namespace {

// Fraction-free (Bareiss) echelon form. Rows are first scaled to integers;
// pivots are searched only in columns < pivot_col_limit so the same routine
// serves solve_linear on an augmented matrix.
struct Echelon {
    std::vector<std::vector<mpz_class>> m;
    std::vector<int> pivot_cols;
    int swaps = 0;
    std::vector<mpz_class> row_scales;
};

mpz_class exact_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r != 0)
        throw InternalError("fraction-free elimination: inexact division");
    return q;
}

Echelon echelon_form(const RatMatrix& a, int pivot_col_limit) {
    const int r = a.rows(), c = a.cols();
    Echelon e;
    e.m.assign(r, std::vector<mpz_class>(c));
    e.row_scales.assign(r, 1);
    for (int i = 0; i < r; ++i) {
        mpz_class lcm_den = 1;
        for (int j = 0; j < c; ++j)
            mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), a(i, j).get_den().get_mpz_t());
        e.row_scales[i] = lcm_den;
        for (int j = 0; j < c; ++j)
            e.m[i][j] = a(i, j).get_num() * (lcm_den / a(i, j).get_den());
    }

    mpz_class prev = 1;
    int pr = 0;
    for (int col = 0; col < pivot_col_limit && pr < r; ++col) {
        int sel = -1;
        for (int i = pr; i < r; ++i)
            if (e.m[i][col] != 0) {
                sel = i;
                break;
            }
        if (sel < 0)
            continue;
        if (sel != pr) {
            std::swap(e.m[sel], e.m[pr]);
            ++e.swaps;
        }
        const mpz_class pivot = e.m[pr][col];
        for (int i = pr + 1; i < r; ++i) {
            for (int j = col + 1; j < c; ++j)
                e.m[i][j] = exact_div(e.m[i][j] * pivot - e.m[i][col] * e.m[pr][j], prev);
            e.m[i][col] = 0;
        }
        prev = pivot;
        e.pivot_cols.push_back(col);
        ++pr;
    }
    return e;
}

RatMatrix primitive_column(const RatMatrix& v) {
    mpz_class lcm_den = 1;
    for (int i = 0; i < v.rows(); ++i)
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), v(i, 0).get_den().get_mpz_t());
    std::vector<mpz_class> w(v.rows());
    mpz_class g = 0;
    for (int i = 0; i < v.rows(); ++i) {
        w[i] = v(i, 0).get_num() * (lcm_den / v(i, 0).get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w[i].get_mpz_t());
    }
    if (g == 0)
        return v;
    int lead = 0;
    while (lead < v.rows() && w[lead] == 0)
        ++lead;
    if (lead < v.rows() && w[lead] < 0)
        g = -g;
    RatMatrix out(v.rows(), 1);
    for (int i = 0; i < v.rows(); ++i)
        out(i, 0) = Rat(w[i] / g);
    return out;
}

} // namespace

std::vector<RatMatrix> kernel_basis(const RatMatrix& a) {
    const int c = a.cols();
    const Echelon e = echelon_form(a, c);
    std::vector<bool> is_pivot(c, false);
    for (int pc : e.pivot_cols)
        is_pivot[pc] = true;

    std::vector<RatMatrix> basis;
    for (int f = 0; f < c; ++f) {
        if (is_pivot[f])
            continue;
        RatMatrix v(c, 1);
        v(f, 0) = 1;
        for (int k = int(e.pivot_cols.size()) - 1; k >= 0; --k) {
            const int pc = e.pivot_cols[k];
            Rat sum(0);
            for (int j = pc + 1; j < c; ++j) {
                if (e.m[k][j] == 0 || v(j, 0) == 0)
                    continue;
                sum += Rat(e.m[k][j]) * v(j, 0);
            }
            if (sum != 0)
                v(pc, 0) = -sum / Rat(e.m[k][pc]);
        }
        basis.push_back(primitive_column(v));
    }
    return basis;
}

RatMatrix kernel_matrix(const RatMatrix& a) {
    const auto basis = kernel_basis(a);
    RatMatrix k(a.cols(), int(basis.size()));
    for (int j = 0; j < int(basis.size()); ++j)
        for (int i = 0; i < a.cols(); ++i)
            k(i, j) = basis[j](i, 0);
    return k;
}

int rank(const RatMatrix& a) {
    return int(echelon_form(a, a.cols()).pivot_cols.size());
}

Rat det(const RatMatrix& a) {
    if (a.rows() != a.cols())
        throw ShapeError("det: matrix not square");
    if (a.rows() == 0)
        return Rat(1);
    const Echelon e = echelon_form(a, a.cols());
    if (int(e.pivot_cols.size()) < a.rows())
        return Rat(0);
    Rat d(e.m[a.rows() - 1][e.pivot_cols.back()]);
    for (const mpz_class& s : e.row_scales)
        d /= Rat(s);
    if (e.swaps % 2)
        d = -d;
    return d;
}

std::optional<RatMatrix> solve_linear(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows())
        throw ShapeError("solve_linear: row counts differ");
    const int ca = a.cols(), cb = b.cols();
    const Echelon e = echelon_form(hstack(a, b), ca);
    const int nzrows = int(e.pivot_cols.size());
    for (int i = nzrows; i < a.rows(); ++i)
        for (int j = ca; j < ca + cb; ++j)
            if (e.m[i][j] != 0)
                return std::nullopt;

    RatMatrix x(ca, cb);
    for (int col = 0; col < cb; ++col) {
        for (int k = nzrows - 1; k >= 0; --k) {
            const int pc = e.pivot_cols[k];
            Rat sum(e.m[k][ca + col]);
            for (int j = pc + 1; j < ca; ++j) {
                if (e.m[k][j] == 0 || x(j, col) == 0)
                    continue;
                sum -= Rat(e.m[k][j]) * x(j, col);
            }
            if (sum != 0)
                x(pc, col) = sum / Rat(e.m[k][pc]);
        }
    }
    return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
    if (a.rows() != a.cols())
        throw ShapeError("inverse: matrix not square");
    if (rank(a) != a.rows())
        return std::nullopt;
    return solve_linear(a, RatMatrix::identity(a.rows()));
}

bool in_span(const std::vector<RatMatrix>& basis, const RatMatrix& m) {
    if (basis.empty())
        return is_zero(m);
    RatMatrix stack(m.rows() * m.cols(), int(basis.size()));
    for (int j = 0; j < int(basis.size()); ++j) {
        require_same_shape(basis[j], m, "in_span");
        const RatMatrix v = vectorize(basis[j]);
        for (int i = 0; i < v.rows(); ++i)
            stack(i, j) = v(i, 0);
    }
    return solve_linear(stack, vectorize(m)).has_value();
}

int span_rank(const std::vector<RatMatrix>& mats) {
    if (mats.empty())
        return 0;
    RatMatrix stack(int(mats.size()), mats[0].rows() * mats[0].cols());
    for (int i = 0; i < int(mats.size()); ++i) {
        const RatMatrix v = vectorize(mats[i]);
        for (int j = 0; j < v.rows(); ++j)
            stack(i, j) = v(j, 0);
    }
    return rank(stack);
}

RatMatrix random_matrix(RatRng& rng, int rows, int cols, int num_range, int den_range) {
    RatMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = rng.rational(num_range, den_range);
    return m;
}

RatMatrix random_vector(RatRng& rng, int n, int num_range, int den_range) {
    return random_matrix(rng, n, 1, num_range, den_range);
}

RatMatrix random_invertible(RatRng& rng, int n) {
    for (;;) {
        RatMatrix m = random_matrix(rng, n, n, 5, 3);
        if (rank(m) == n)
            return m;
    }
}

ParamMatrix::ParamMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw ShapeError("negative matrix dimension");
    e_.assign(std::size_t(rows) * cols, LinForm());
}

ParamMatrix ParamMatrix::from_constant(const RatMatrix& m) {
    ParamMatrix p(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            p(i, j) = LinForm(m(i, j));
    return p;
}

std::vector<std::string> ParamMatrix::params() const {
    std::set<std::string> names;
    for (const LinForm& f : e_)
        for (const auto& [name, c] : f.terms())
            names.insert(name);
    return {names.begin(), names.end()};
}

std::string ParamMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j)
            os << (j ? ", " : "") << (*this)(i, j).str();
        os << "]\n";
    }
    return os.str();
}

ParamMatrix operator+(const ParamMatrix& a, const ParamMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("add: shape mismatch");
    ParamMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j) + b(i, j);
    return r;
}

ParamMatrix operator*(const ParamMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError("mul: inner dimensions differ");
    ParamMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const LinForm& f = a(i, k);
            if (f.is_zero())
                continue;
            for (int j = 0; j < b.cols(); ++j) {
                if (b(k, j) == 0)
                    continue;
                r(i, j) += f * b(k, j);
            }
        }
    return r;
}

ParamMatrix operator*(const RatMatrix& a, const ParamMatrix& b) {
    if (a.cols() != b.rows())
        throw ShapeError("mul: inner dimensions differ");
    ParamMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0)
                continue;
            for (int j = 0; j < b.cols(); ++j) {
                if (b(k, j).is_zero())
                    continue;
                r(i, j) += b(k, j) * a(i, k);
            }
        }
    return r;
}

ParamMatrix operator*(const Rat& s, const ParamMatrix& a) {
    ParamMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j) * s;
    return r;
}

ParamMatrix transpose(const ParamMatrix& a) {
    ParamMatrix r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(j, i) = a(i, j);
    return r;
}

bool is_zero(const ParamMatrix& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero())
                return false;
    return true;
}

bool is_symmetric(const ParamMatrix& a) {
    if (a.rows() != a.cols())
        return false;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != a(j, i))
                return false;
    return true;
}

bool column_is_zero(const ParamMatrix& a, int j) {
    for (int i = 0; i < a.rows(); ++i)
        if (!a(i, j).is_zero())
            return false;
    return true;
}

void scatter(ParamMatrix& a, const std::vector<int>& idx, const ParamMatrix& b) {
    if (int(idx.size()) != b.rows() || b.rows() != b.cols())
        throw ShapeError("scatter: index list must match square block");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            a(idx[i], idx[j]) = b(i, j);
}

namespace {

void check_assignment_keys(const ParamMatrix& a, const Assignment& values) {
    const auto names = a.params();
    for (const auto& [key, value] : values) {
        (void)value;
        if (!std::binary_search(names.begin(), names.end(), key))
            throw InputError("unknown parameter: " + key);
    }
}

} // namespace

RatMatrix substitute(const ParamMatrix& a, const Assignment& values) {
    check_assignment_keys(a, values);
    RatMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j).evaluate(values);
    return r;
}

ParamMatrix substitute_partial(const ParamMatrix& a, const Assignment& values) {
    check_assignment_keys(a, values);
    ParamMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j).substitute(values);
    return r;
}

RatMatrix coefficient_matrix(const ParamMatrix& a, const std::string& name) {
    RatMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j).coeff(name);
    return r;
}

RatMatrix constant_matrix(const ParamMatrix& a) {
    RatMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j).constant();
    return r;
}

ParamMatrix with_prefix(const ParamMatrix& a, const std::string& prefix) {
    ParamMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r(i, j) = a(i, j).with_prefix(prefix);
    return r;
}

} // namespace hamfactor
