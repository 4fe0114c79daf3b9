#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "wsim/weight.hh"

namespace wsim {

/// Sparse semiring matrix.  Stored entries are never the semiring zero;
/// absent entries read as zero.  Vectors are 1xN or Nx1 matrices.
class Matrix {
public:
    Matrix(SemiringKind kind, int rows, int cols);
    static Matrix identity(SemiringKind kind, int n);

    SemiringKind kind() const { return kind_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const;

    Weight at(int r, int c) const;
    void set(int r, int c, const Weight& w);
    const std::map<int, Weight>& row(int r) const;

    bool operator==(const Matrix& other) const;
    bool operator!=(const Matrix& other) const { return !(*this == other); }

private:
    void check_index(int r, int c) const;

    SemiringKind kind_;
    int rows_;
    int cols_;
    std::vector<std::map<int, Weight>> data_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
bool mat_leq(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_power(const Matrix& a, unsigned n);
Matrix direct_sum(const std::vector<Matrix>& blocks);
Matrix transpose(const Matrix& a);

/// Text format: first line "rows cols", then `rows` lines of `cols`
/// whitespace-separated weight tokens (dense; the zero of the semiring is
/// written in its usual token form, e.g. "0" or "-inf").
void save_matrix(const Matrix& m, std::ostream& os);
Matrix load_matrix(SemiringKind kind, std::istream& is);
std::string matrix_to_string(const Matrix& m);

std::ostream& operator<<(std::ostream& os, const Matrix& m);

}  // namespace wsim
