#include "chemorep/sparse.hpp"

#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace chemorep {

CsrMatrix::CsrMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), row_offsets_(static_cast<std::size_t>(rows) + 1, 0)
{
    CHEMOREP_REQUIRE(rows >= 0 && cols >= 0, "CsrMatrix: negative dimension");
}

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> col_indices,
                     std::vector<double> values)
    : rows_(rows), cols_(cols), row_offsets_(std::move(row_offsets)), col_indices_(std::move(col_indices)),
      values_(std::move(values))
{
    CHEMOREP_REQUIRE(rows >= 0 && cols >= 0, "CsrMatrix: negative dimension");
    CHEMOREP_REQUIRE(row_offsets_.size() == static_cast<std::size_t>(rows) + 1, "CsrMatrix: row_offsets size != rows + 1");
    CHEMOREP_REQUIRE(row_offsets_.front() == 0, "CsrMatrix: row_offsets[0] != 0");
    CHEMOREP_REQUIRE(static_cast<std::size_t>(row_offsets_.back()) == values_.size() &&
                         col_indices_.size() == values_.size(),
                     "CsrMatrix: stored value count != row_offsets[rows]");
    for (int i = 0; i < rows_; ++i) {
        CHEMOREP_REQUIRE(row_offsets_[i] <= row_offsets_[i + 1], "CsrMatrix: row_offsets not monotone");
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
            CHEMOREP_REQUIRE(col_indices_[p] >= 0 && col_indices_[p] < cols_, "CsrMatrix: column index out of range");
            CHEMOREP_REQUIRE(p == row_offsets_[i] || col_indices_[p - 1] < col_indices_[p],
                             "CsrMatrix: column indices not strictly increasing within a row");
        }
    }
}

int CsrMatrix::find(int i, int j) const
{
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) return -1;
    const auto first = col_indices_.begin() + row_offsets_[i];
    const auto last = col_indices_.begin() + row_offsets_[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return -1;
    return static_cast<int>(it - col_indices_.begin());
}

double CsrMatrix::at(int i, int j) const
{
    const int p = find(i, j);
    return p < 0 ? 0.0 : values_[p];
}

void CsrMatrix::add(int i, int j, double v)
{
    const int p = find(i, j);
    if (p < 0) throw InvalidArgument(fmt::format("CsrMatrix::add: ({}, {}) not in sparsity pattern", i, j));
    values_[p] += v;
}

void CsrMatrix::set_zero()
{
    std::fill(values_.begin(), values_.end(), 0.0);
}

void CsrMatrix::scale(double s)
{
    for (double& v : values_) v *= s;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    CHEMOREP_REQUIRE(x.size() == static_cast<std::size_t>(cols_) && y.size() == static_cast<std::size_t>(rows_),
                     "CsrMatrix::multiply: size mismatch");
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += values_[p] * x[col_indices_[p]];
        y[i] = s;
    }
}

Vector CsrMatrix::operator*(std::span<const double> x) const
{
    Vector y(static_cast<std::size_t>(rows_));
    multiply(x, y);
    return y;
}

Vector CsrMatrix::diagonal() const
{
    Vector d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(static_cast<int>(i), static_cast<int>(i));
    return d;
}

CsrMatrix CsrMatrix::transpose() const
{
    std::vector<int> offsets(static_cast<std::size_t>(cols_) + 1, 0);
    for (int c : col_indices_) ++offsets[c + 1];
    for (int j = 0; j < cols_; ++j) offsets[j + 1] += offsets[j];
    std::vector<int> cols(values_.size());
    std::vector<double> vals(values_.size());
    std::vector<int> next(offsets.begin(), offsets.end() - 1);
    for (int i = 0; i < rows_; ++i) {
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
            const int q = next[col_indices_[p]]++;
            cols[q] = i;
            vals[q] = values_[p];
        }
    }
    return CsrMatrix(cols_, rows_, std::move(offsets), std::move(cols), std::move(vals));
}

std::vector<std::vector<double>> CsrMatrix::to_dense() const
{
    std::vector<std::vector<double>> d(static_cast<std::size_t>(rows_), std::vector<double>(static_cast<std::size_t>(cols_), 0.0));
    for (int i = 0; i < rows_; ++i)
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) d[i][col_indices_[p]] = values_[p];
    return d;
}

double CsrMatrix::bilinear(std::span<const double> x, std::span<const double> y) const
{
    CHEMOREP_REQUIRE(x.size() == static_cast<std::size_t>(rows_) && y.size() == static_cast<std::size_t>(cols_),
                     "CsrMatrix::bilinear: size mismatch");
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double r = 0.0;
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) r += values_[p] * y[col_indices_[p]];
        s += x[i] * r;
    }
    return s;
}

double CsrMatrix::max_asymmetry() const
{
    CHEMOREP_REQUIRE(rows_ == cols_, "max_asymmetry: matrix not square");
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
            worst = std::max(worst, std::abs(values_[p] - at(col_indices_[p], i)));
    return worst;
}

CsrMatrix coo_to_csr(int rows, int cols, std::vector<Triplet> triplets)
{
    CHEMOREP_REQUIRE(rows >= 0 && cols >= 0, "coo_to_csr: negative dimension");
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw InvalidArgument(fmt::format("coo_to_csr: triplet ({}, {}, {}) out of range for {}x{} matrix", t.row,
                                              t.col, t.value, rows, cols));
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return a.value < b.value;
    });

    std::vector<int> offsets(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> vals;
    col_idx.reserve(triplets.size());
    vals.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size();) {
        const int r = triplets[k].row;
        const int c = triplets[k].col;
        double s = 0.0;
        while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) s += triplets[k++].value;
        col_idx.push_back(c);
        vals.push_back(s);
        ++offsets[r + 1];
    }
    for (int i = 0; i < rows; ++i) offsets[i + 1] += offsets[i];
    return CsrMatrix(rows, cols, std::move(offsets), std::move(col_idx), std::move(vals));
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta)
{
    CHEMOREP_REQUIRE(a.rows() == b.rows() && a.cols() == b.cols(), "add: dimension mismatch");
    const auto& ao = a.row_offsets();
    const auto& ac = a.col_indices();
    const auto& av = a.values();
    const auto& bo = b.row_offsets();
    const auto& bc = b.col_indices();
    const auto& bv = b.values();

    std::vector<int> offsets(static_cast<std::size_t>(a.rows()) + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(static_cast<std::size_t>(std::max(a.nnz(), b.nnz())));
    vals.reserve(cols.capacity());
    for (int i = 0; i < a.rows(); ++i) {
        int p = ao[i];
        int q = bo[i];
        while (p < ao[i + 1] || q < bo[i + 1]) {
            const int ca = p < ao[i + 1] ? ac[p] : a.cols();
            const int cb = q < bo[i + 1] ? bc[q] : b.cols();
            if (ca == cb) {
                cols.push_back(ca);
                vals.push_back(alpha * av[p++] + beta * bv[q++]);
            } else if (ca < cb) {
                cols.push_back(ca);
                vals.push_back(alpha * av[p++]);
            } else {
                cols.push_back(cb);
                vals.push_back(beta * bv[q++]);
            }
        }
        offsets[i + 1] = static_cast<int>(cols.size());
    }
    return CsrMatrix(a.rows(), a.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix block_matrix(const std::array<std::array<const CsrMatrix*, 2>, 2>& blocks, std::array<int, 2> row_sizes,
                       std::array<int, 2> col_sizes)
{
    for (int bi = 0; bi < 2; ++bi) {
        for (int bj = 0; bj < 2; ++bj) {
            const CsrMatrix* blk = blocks[bi][bj];
            if (blk && (blk->rows() != row_sizes[bi] || blk->cols() != col_sizes[bj]))
                throw InvalidArgument(fmt::format("block_matrix: block ({}, {}) is {}x{}, expected {}x{}", bi, bj,
                                                  blk->rows(), blk->cols(), row_sizes[bi], col_sizes[bj]));
        }
    }
    const int rows = row_sizes[0] + row_sizes[1];
    const int cols = col_sizes[0] + col_sizes[1];
    std::size_t nnz = 0;
    for (const auto& br : blocks)
        for (const CsrMatrix* blk : br)
            if (blk) nnz += static_cast<std::size_t>(blk->nnz());

    std::vector<int> offsets(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> vals;
    col_idx.reserve(nnz);
    vals.reserve(nnz);
    int row = 0;
    for (int bi = 0; bi < 2; ++bi) {
        for (int i = 0; i < row_sizes[bi]; ++i, ++row) {
            for (int bj = 0; bj < 2; ++bj) {
                const CsrMatrix* blk = blocks[bi][bj];
                if (!blk) continue;
                const int shift = bj == 0 ? 0 : col_sizes[0];
                for (int p = blk->row_offsets()[i]; p < blk->row_offsets()[i + 1]; ++p) {
                    col_idx.push_back(blk->col_indices()[p] + shift);
                    vals.push_back(blk->values()[p]);
                }
            }
            offsets[row + 1] = static_cast<int>(col_idx.size());
        }
    }
    return CsrMatrix(rows, cols, std::move(offsets), std::move(col_idx), std::move(vals));
}

void zero_rows(CsrMatrix& a, std::span<const int> rows)
{
    auto& vals = a.values();
    for (int r : rows) {
        CHEMOREP_REQUIRE(r >= 0 && r < a.rows(), "zero_rows: row out of range");
        for (int p = a.row_offsets()[r]; p < a.row_offsets()[r + 1]; ++p) vals[p] = 0.0;
    }
}

void zero_cols(CsrMatrix& a, std::span<const int> cols)
{
    auto& vals = a.values();
    const auto& ci = a.col_indices();
    for (std::size_t p = 0; p < vals.size(); ++p)
        if (std::binary_search(cols.begin(), cols.end(), ci[p])) vals[p] = 0.0;
}

void constrain_symmetric(CsrMatrix& a, std::span<const int> dofs)
{
    CHEMOREP_REQUIRE(a.rows() == a.cols(), "constrain_symmetric: matrix not square");
    zero_cols(a, dofs);
    zero_rows(a, dofs);
    for (int d : dofs) {
        const int p = a.find(d, d);
        if (p < 0) throw InvalidArgument(fmt::format("constrain_symmetric: no diagonal entry in row {}", d));
        a.values()[p] = 1.0;
    }
}

void write_matrix_market(const CsrMatrix& a, std::ostream& os)
{
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << fmt::format("{} {} {}\n", a.rows(), a.cols(), a.nnz());
    for (int i = 0; i < a.rows(); ++i)
        for (int p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p)
            os << fmt::format("{} {} {:.17g}\n", i + 1, a.col_indices()[p] + 1, a.values()[p]);
}

void write_matrix_market(const CsrMatrix& a, const std::string& path)
{
    std::ofstream os(path);
    if (!os) throw IoError(fmt::format("cannot open '{}' for writing", path));
    write_matrix_market(a, os);
    if (!os) throw IoError(fmt::format("failed writing '{}'", path));
}

double dot(std::span<const double> a, std::span<const double> b)
{
    CHEMOREP_REQUIRE(a.size() == b.size(), "dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

} // namespace chemorep
