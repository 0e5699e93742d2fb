#ifndef LRA_LINALG_HPP
#define LRA_LINALG_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace lra {

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const { return data_; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("dimension mismatch in product");
        DenseMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double v = a(i, k);
                if (v == 0.0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += v * b(k, j);
            }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct SparseEntry {
    std::uint32_t col;
    double value;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Compressed sparse rows; each row's entries sorted by column with no
/// explicit zeros.
class SparseRows {
public:
    SparseRows() = default;
    explicit SparseRows(std::size_t cols) : cols_(cols) {}

    void add_row(std::vector<SparseEntry> entries) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].col >= cols_) throw std::out_of_range("sparse column out of range");
            if (i && entries[i].col <= entries[i - 1].col) throw std::invalid_argument("sparse row not sorted");
        }
        std::erase_if(entries, [](const SparseEntry& e) { return e.value == 0.0; });
        rows_.push_back(std::move(entries));
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    std::span<const SparseEntry> row(std::size_t r) const { return rows_[r]; }
    std::vector<SparseEntry>& mutable_row(std::size_t r) { return rows_[r]; }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : rows_) n += r.size();
        return n;
    }

    static SparseRows from_dense(const DenseMatrix& d) {
        SparseRows s(d.cols());
        for (std::size_t r = 0; r < d.rows(); ++r) {
            std::vector<SparseEntry> e;
            for (std::size_t c = 0; c < d.cols(); ++c)
                if (d(r, c) != 0.0) e.push_back({static_cast<std::uint32_t>(c), d(r, c)});
            s.add_row(std::move(e));
        }
        return s;
    }

    DenseMatrix to_dense() const {
        DenseMatrix d(rows(), cols_);
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto& e : rows_[r]) d(r, e.col) = e.value;
        return d;
    }

    /// this * b, where b is cols() x k.
    DenseMatrix multiply(const DenseMatrix& b) const {
        if (b.rows() != cols_) throw std::invalid_argument("dimension mismatch in sparse product");
        DenseMatrix out(rows(), b.cols());
        for (std::size_t r = 0; r < rows(); ++r) {
            auto dst = out.row(r);
            for (const auto& e : rows_[r]) {
                const auto src = b.row(e.col);
                for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += e.value * src[j];
            }
        }
        return out;
    }

    /// this^T * b, where b is rows() x k.
    DenseMatrix transpose_multiply(const DenseMatrix& b) const {
        if (b.rows() != rows()) throw std::invalid_argument("dimension mismatch in sparse product");
        DenseMatrix out(cols_, b.cols());
        for (std::size_t r = 0; r < rows(); ++r) {
            const auto src = b.row(r);
            for (const auto& e : rows_[r]) {
                auto dst = out.row(e.col);
                for (std::size_t j = 0; j < src.size(); ++j) dst[j] += e.value * src[j];
            }
        }
        return out;
    }

private:
    std::size_t cols_ = 0;
    std::vector<std::vector<SparseEntry>> rows_;
};

/// Cosine of two vectors; nullopt when either has zero length.
inline std::optional<double> cosine(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return std::nullopt;
    const double c = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(c, -1.0, 1.0);
}

/// Cosine of two sparse rows.
inline std::optional<double> cosine(std::span<const SparseEntry> a, std::span<const SparseEntry> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& e : a) na += e.value * e.value;
    for (const auto& e : b) nb += e.value * e.value;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].col < b[j].col)
            ++i;
        else if (b[j].col < a[i].col)
            ++j;
        else
            dot += a[i++].value * b[j++].value;
    }
    if (na == 0.0 || nb == 0.0) return std::nullopt;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

} // namespace lra

#endif
