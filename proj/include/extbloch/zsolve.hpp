#pragma once

// Exact integer linear algebra: row-style Hermite normal form, integer
// solutions of A x = b with a kernel basis, and linear systems over GF(2).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace extbloch {

using BigInt = boost::multiprecision::cpp_int;
using IntVector = std::vector<BigInt>;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    /// Throws DomainError on ragged input.
    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);
    static IntMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] IntVector row(std::size_t i) const;
    void append_row(const IntVector& r);
    [[nodiscard]] IntMatrix transpose() const;
    [[nodiscard]] IntVector apply(const IntVector& x) const;
    [[nodiscard]] bool is_zero() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

    [[nodiscard]] std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> data_;
};

struct HermiteForm {
    IntMatrix H;  ///< row echelon, positive pivots, entries above a pivot reduced into [0, pivot)
    IntMatrix U;  ///< unimodular with U * A == H
    std::size_t rank = 0;
};

HermiteForm hermite_normal_form(const IntMatrix& a);

/// Exact determinant (fraction-free elimination). Throws DomainError if not square.
BigInt determinant(const IntMatrix& a);

struct IntegerSolution {
    IntVector particular;          ///< a x0 with A x0 = b
    std::vector<IntVector> kernel;  ///< Z-basis of {x : A x = 0}, in Hermite form
};

/// Integer solution of A x = b, or nullopt when none exists.
std::optional<IntegerSolution> solve_integer(const IntMatrix& a, const IntVector& b);

using BitVector = std::vector<std::uint8_t>;
using BitMatrix = std::vector<BitVector>;

/// Lexicographically least solution of A x = b over GF(2), or nullopt.
/// `cols` is needed when A has no rows.
std::optional<BitVector> solve_mod2(const BitMatrix& a, const BitVector& b, std::size_t cols);

inline std::optional<BitVector> solve_mod2(const BitMatrix& a, const BitVector& b) {
    return solve_mod2(a, b, a.empty() ? 0 : a.front().size());
}

} // namespace extbloch
