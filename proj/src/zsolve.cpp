#include "extbloch/zsolve.hpp"

#include "extbloch/errors.hpp"

#include <sstream>
#include <utility>

namespace extbloch {

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DomainError("IntMatrix::from_rows: ragged rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntVector IntMatrix::row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

void IntMatrix::append_row(const IntVector& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw DomainError("IntMatrix::append_row: width mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntVector IntMatrix::apply(const IntVector& x) const {
    if (x.size() != cols_) throw DomainError("IntMatrix::apply: dimension mismatch");
    IntVector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!x[j].is_zero()) y[i] += (*this)(i, j) * x[j];
    return y;
}

bool IntMatrix::is_zero() const {
    for (const auto& v : data_)
        if (!v.is_zero()) return false;
    return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("IntMatrix product: dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const BigInt& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void swap_rows(IntMatrix& m, std::size_t r, std::size_t s) {
    if (r == s) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(s, j));
}

// row r -= f * row s
void sub_multiple(IntMatrix& m, std::size_t r, std::size_t s, const BigInt& f) {
    if (f.is_zero()) return;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m(s, j).is_zero()) m(r, j) -= f * m(s, j);
}

void negate_row(IntMatrix& m, std::size_t r) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

// Floor division for the reduction of entries into [0, pivot).
BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace

HermiteForm hermite_normal_form(const IntMatrix& a) {
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(a.rows());
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < h.cols() && pivot_row < h.rows(); ++col) {
        // Euclid on the column below pivot_row: repeatedly move the smallest
        // nonzero entry up and reduce the others by it.
        while (true) {
            std::size_t best = h.rows();
            for (std::size_t r = pivot_row; r < h.rows(); ++r) {
                if (h(r, col).is_zero()) continue;
                if (best == h.rows() || abs(h(r, col)) < abs(h(best, col))) best = r;
            }
            if (best == h.rows()) break;
            swap_rows(h, pivot_row, best);
            swap_rows(u, pivot_row, best);
            bool done = true;
            for (std::size_t r = pivot_row + 1; r < h.rows(); ++r) {
                if (h(r, col).is_zero()) continue;
                const BigInt f = h(r, col) / h(pivot_row, col);
                sub_multiple(h, r, pivot_row, f);
                sub_multiple(u, r, pivot_row, f);
                if (!h(r, col).is_zero()) done = false;
            }
            if (done) break;
        }
        if (h(pivot_row, col).is_zero()) continue;
        if (h(pivot_row, col) < 0) {
            negate_row(h, pivot_row);
            negate_row(u, pivot_row);
        }
        // Reduce the entries above the pivot.
        for (std::size_t r = 0; r < pivot_row; ++r) {
            const BigInt f = floor_div(h(r, col), h(pivot_row, col));
            sub_multiple(h, r, pivot_row, f);
            sub_multiple(u, r, pivot_row, f);
        }
        ++pivot_row;
    }
    return {std::move(h), std::move(u), pivot_row};
}

BigInt determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw DomainError("determinant: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    BigInt sign = 1;
    BigInt prev = 1;
    // Bareiss fraction-free elimination; every division below is exact.
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            std::size_t swap_with = n;
            for (std::size_t r = k + 1; r < n; ++r)
                if (!m(r, k).is_zero()) {
                    swap_with = r;
                    break;
                }
            if (swap_with == n) return 0;
            swap_rows(m, k, swap_with);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

std::optional<IntegerSolution> solve_integer(const IntMatrix& a, const IntVector& b) {
    if (b.size() != a.rows()) throw DomainError("solve_integer: right-hand side has wrong length");
    const std::size_t n = a.cols();
    // U A^T = H, so A U^T = H^T; substitute x = U^T y.
    const HermiteForm hf = hermite_normal_form(a.transpose());
    const IntMatrix& h = hf.H;

    IntVector y(n);
    for (std::size_t k = 0; k < hf.rank; ++k) {
        std::size_t c = 0;
        while (h(k, c).is_zero()) ++c;
        BigInt rhs = b[c];
        for (std::size_t kk = 0; kk < k; ++kk) rhs -= y[kk] * h(kk, c);
        if (rhs % h(k, c) != 0) return std::nullopt;
        y[k] = rhs / h(k, c);
    }
    // Columns that are not pivots must be satisfied automatically.
    for (std::size_t c = 0; c < a.rows(); ++c) {
        BigInt acc = 0;
        for (std::size_t k = 0; k < hf.rank; ++k) acc += y[k] * h(k, c);
        if (acc != b[c]) return std::nullopt;
    }

    IntegerSolution sol;
    sol.particular = hf.U.transpose().apply(y);
    IntMatrix ker(0, n);
    for (std::size_t k = hf.rank; k < n; ++k) ker.append_row(hf.U.row(k));
    if (ker.rows() > 0) {
        const HermiteForm kf = hermite_normal_form(ker);
        for (std::size_t k = 0; k < kf.rank; ++k) sol.kernel.push_back(kf.H.row(k));
    }
    return sol;
}

std::optional<BitVector> solve_mod2(const BitMatrix& a, const BitVector& b, std::size_t cols) {
    if (a.size() != b.size()) throw DomainError("solve_mod2: right-hand side has wrong length");
    BitMatrix m = a;
    BitVector rhs = b;
    for (auto& r : m)
        if (r.size() != cols) throw DomainError("solve_mod2: ragged matrix");

    // Pivot on the highest-index columns first, so the free variables are the
    // low-index ones; setting them to zero gives the lexicographically least x.
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
    std::size_t r = 0;
    for (std::size_t step = 0; step < cols && r < m.size(); ++step) {
        const std::size_t c = cols - 1 - step;
        std::size_t sel = m.size();
        for (std::size_t i = r; i < m.size(); ++i)
            if (m[i][c] & 1U) {
                sel = i;
                break;
            }
        if (sel == m.size()) continue;
        std::swap(m[r], m[sel]);
        std::swap(rhs[r], rhs[sel]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || !(m[i][c] & 1U)) continue;
            for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
            rhs[i] ^= rhs[r];
        }
        pivots.emplace_back(r, c);
        ++r;
    }
    for (std::size_t i = r; i < m.size(); ++i)
        if (rhs[i] & 1U) return std::nullopt;

    BitVector x(cols, 0);
    for (const auto& [row, col] : pivots) x[col] = rhs[row] & 1U;
    return x;
}

} // namespace extbloch
