#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pmt {

// Dense row-major design matrix (rows = records, columns = features).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<double> col(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
        return out;
    }

    void set_col(std::size_t c, const std::vector<double>& v) {
        for (std::size_t r = 0; r < rows_; ++r) data_[r * cols_ + c] = v[r];
    }

    // New matrix keeping only the given columns, in the given order.
    Matrix select_cols(const std::vector<std::size_t>& cols) const {
        Matrix out(rows_, cols.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < cols.size(); ++j)
                out(r, j) = (*this)(r, cols[j]);
        return out;
    }

    void append_row(std::span<const double> v) {
        data_.insert(data_.end(), v.begin(), v.end());
        ++rows_;
    }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace pmt
