#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chemorep {

using Vector = std::vector<double>;

struct Triplet {
    int row{0};
    int col{0};
    double value{0.0};
};

/// Compressed sparse row matrix. Column indices are strictly increasing within a row.
/// Explicit zeros may be stored (assembly keeps a fixed pattern).
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(int rows, int cols);
    CsrMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> col_indices,
              std::vector<double> values);

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }
    [[nodiscard]] int nnz() const noexcept { return static_cast<int>(values_.size()); }

    [[nodiscard]] const std::vector<int>& row_offsets() const noexcept { return row_offsets_; }
    [[nodiscard]] const std::vector<int>& col_indices() const noexcept { return col_indices_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::vector<double>& values() noexcept { return values_; }

    /// Stored value at (i, j), 0 if (i, j) is outside the pattern.
    [[nodiscard]] double at(int i, int j) const;

    /// Position of (i, j) in values(), or -1 if not in the pattern.
    [[nodiscard]] int find(int i, int j) const;

    /// values[find(i, j)] += v. Throws if (i, j) is not in the pattern.
    void add(int i, int j, double v);

    void set_zero();
    void scale(double s);

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] Vector operator*(std::span<const double> x) const;

    [[nodiscard]] Vector diagonal() const;
    [[nodiscard]] CsrMatrix transpose() const;
    [[nodiscard]] std::vector<std::vector<double>> to_dense() const;

    /// x^T A y
    [[nodiscard]] double bilinear(std::span<const double> x, std::span<const double> y) const;

    /// Largest |A_ij - A_ji| over the union of both patterns.
    [[nodiscard]] double max_asymmetry() const;

private:
    int rows_{0};
    int cols_{0};
    std::vector<int> row_offsets_{0};
    std::vector<int> col_indices_;
    std::vector<double> values_;
};

/// Sums duplicate (row, col) entries. Duplicates are summed in ascending value order, so the
/// resulting arrays are bit-identical for any permutation of the input.
[[nodiscard]] CsrMatrix coo_to_csr(int rows, int cols, std::vector<Triplet> triplets);

/// alpha * A + beta * B over the union pattern.
[[nodiscard]] CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha = 1.0, double beta = 1.0);

/// Concatenates a 2x2 block matrix. Null blocks are zero; block row heights and column widths
/// are taken from `row_sizes` and `col_sizes`.
[[nodiscard]] CsrMatrix block_matrix(const std::array<std::array<const CsrMatrix*, 2>, 2>& blocks,
                                     std::array<int, 2> row_sizes, std::array<int, 2> col_sizes);

/// Replaces constrained rows by identity rows and zeroes constrained columns elsewhere.
/// Square matrices only; `dofs` must be sorted.
void constrain_symmetric(CsrMatrix& a, std::span<const int> dofs);

/// Zeroes the listed rows (no diagonal entry). Used for off-diagonal coupling blocks.
void zero_rows(CsrMatrix& a, std::span<const int> rows);

/// Zeroes the listed columns. `cols` must be sorted.
void zero_cols(CsrMatrix& a, std::span<const int> cols);

/// `%%MatrixMarket matrix coordinate real general`, 1-based indices, all stored entries.
void write_matrix_market(const CsrMatrix& a, std::ostream& os);
void write_matrix_market(const CsrMatrix& a, const std::string& path);

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm2(std::span<const double> a);

} // namespace chemorep
