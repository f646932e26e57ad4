#ifndef MLORC_MATRIX_HPP
#define MLORC_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mlorc {

// Dense real matrix, row-major, 64-bit floats. The single value carrier for
// weights, gradients, moments and sketches throughout the library.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols);  // zero-initialized
    Matrix(int rows, int cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[idx(i, j)]; }
    double operator()(int i, int j) const { return data_[idx(i, j)]; }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool is_finite() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double c);

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * cols_ + j;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double c, Matrix a);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix hadamard(const Matrix& a, const Matrix& b);

double frob_norm(const Matrix& a);
double l11_norm(const Matrix& a);
double max_abs(const Matrix& a);
double min_entry(const Matrix& a);

// Throws shape_error if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* context);

}  // namespace mlorc

#endif
