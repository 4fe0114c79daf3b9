#include "wsim/matrix.hh"

#include <sstream>

namespace wsim {

namespace {

void require_same_kind(const Matrix& a, const Matrix& b) {
    if (a.kind() != b.kind())
        throw UsageError("matrix kind mismatch: " + kind_name(a.kind()) + " vs " +
                         kind_name(b.kind()));
}

}  // namespace

Matrix::Matrix(SemiringKind kind, int rows, int cols)
    : kind_(kind), rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows)) {
    if (rows < 0 || cols < 0) throw UsageError("negative matrix dimension");
}

Matrix Matrix::identity(SemiringKind kind, int n) {
    Matrix m(kind, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, Weight::one(kind));
    return m;
}

std::size_t Matrix::nnz() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
}

void Matrix::check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw UsageError("matrix index out of range");
}

Weight Matrix::at(int r, int c) const {
    check_index(r, c);
    const auto& row = data_[static_cast<std::size_t>(r)];
    auto it = row.find(c);
    if (it == row.end()) return Weight::zero(kind_);
    return it->second;
}

void Matrix::set(int r, int c, const Weight& w) {
    check_index(r, c);
    if (w.kind() != kind_) throw UsageError("entry kind mismatch");
    auto& row = data_[static_cast<std::size_t>(r)];
    if (w.is_zero())
        row.erase(c);
    else
        row.insert_or_assign(c, w);
}

const std::map<int, Weight>& Matrix::row(int r) const {
    if (r < 0 || r >= rows_) throw UsageError("matrix row out of range");
    return data_[static_cast<std::size_t>(r)];
}

bool Matrix::operator==(const Matrix& other) const {
    return kind_ == other.kind_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    require_same_kind(a, b);
    if (a.cols() != b.rows())
        throw UsageError("matrix product dimension mismatch: " + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()));
    Matrix out(a.kind(), a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        std::map<int, Weight> acc;
        for (const auto& [j, w1] : a.row(i)) {
            for (const auto& [k, w2] : b.row(j)) {
                Weight term = sr_mul(w1, w2);
                if (term.is_zero()) continue;
                auto it = acc.find(k);
                if (it == acc.end())
                    acc.emplace(k, term);
                else
                    it->second = sr_add(it->second, term);
            }
        }
        for (const auto& [k, w] : acc) out.set(i, k, w);
    }
    return out;
}

bool mat_leq(const Matrix& a, const Matrix& b) {
    require_same_kind(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw UsageError("entrywise order needs equal shapes");
    // Absent left entries are the zero, below everything by positivity.
    for (int i = 0; i < a.rows(); ++i)
        for (const auto& [j, w] : a.row(i))
            if (!sr_leq(w, b.at(i, j))) return false;
    return true;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    require_same_kind(a, b);
    Matrix out(a.kind(), a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (const auto& [j, wa] : a.row(i)) {
            for (int k = 0; k < b.rows(); ++k) {
                for (const auto& [l, wb] : b.row(k)) {
                    Weight w = sr_mul(wa, wb);
                    if (!w.is_zero()) out.set(i * b.rows() + k, j * b.cols() + l, w);
                }
            }
        }
    }
    return out;
}

Matrix kron_power(const Matrix& a, unsigned n) {
    Matrix out(a.kind(), 1, 1);
    out.set(0, 0, Weight::one(a.kind()));
    for (unsigned i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

Matrix direct_sum(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) throw UsageError("direct_sum of an empty list");
    SemiringKind kind = blocks.front().kind();
    int rows = 0, cols = 0;
    for (const auto& b : blocks) {
        if (b.kind() != kind) throw UsageError("direct_sum kind mismatch");
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out(kind, rows, cols);
    int ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (const auto& [j, w] : b.row(i)) out.set(ro + i, co + j, w);
        ro += b.rows();
        co += b.cols();
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.kind(), a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (const auto& [j, w] : a.row(i)) out.set(j, i, w);
    return out;
}

void save_matrix(const Matrix& m, std::ostream& os) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_weight(m.at(i, j));
        }
        os << '\n';
    }
}

Matrix load_matrix(SemiringKind kind, std::istream& is) {
    int rows = 0, cols = 0;
    if (!(is >> rows >> cols)) throw InputError("matrix file: missing 'rows cols' header");
    if (rows < 0 || cols < 0) throw InputError("matrix file: negative dimension");
    Matrix m(kind, rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            std::string tok;
            if (!(is >> tok))
                throw InputError("matrix file: expected " + std::to_string(rows * cols) +
                                 " entries");
            m.set(i, j, parse_weight(kind, tok));
        }
    }
    return m;
}

std::string matrix_to_string(const Matrix& m) {
    std::ostringstream os;
    save_matrix(m, os);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    save_matrix(m, os);
    return os;
}

}  // namespace wsim
