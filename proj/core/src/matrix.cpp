#include "mlorc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mlorc/errors.hpp"

namespace mlorc {

namespace {

void check_positive_dims(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw shape_error("matrix dimensions must be positive, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
    }
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw shape_error(std::string(op) + ": shape mismatch " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                          std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_positive_dims(rows, cols);
    data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_positive_dims(rows, cols);
    if (data_.size() != static_cast<std::size_t>(rows) * cols) {
        throw shape_error("matrix data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    check_positive_dims(rows_, cols_);
    data_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) {
            throw shape_error("ragged initializer list");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double x) { return std::isfinite(x); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
    check_same_shape(*this, other, "add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    check_same_shape(*this, other, "sub");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double c) {
    for (double& x : data_) x *= c;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double c, Matrix a) { return a *= c; }

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw shape_error("matmul: inner dimensions " + std::to_string(a.cols()) +
                          " and " + std::to_string(b.rows()) + " do not agree");
    }
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "hadamard");
    Matrix out = a;
    auto od = out.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] *= bd[i];
    return out;
}

double frob_norm(const Matrix& a) {
    // scaled accumulation to dodge overflow on extreme inputs
    double scale = max_abs(a);
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (double x : a.data()) {
        const double r = x / scale;
        sum += r * r;
    }
    return scale * std::sqrt(sum);
}

double l11_norm(const Matrix& a) {
    double sum = 0.0;
    for (double x : a.data()) sum += std::abs(x);
    return sum;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double min_entry(const Matrix& a) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : a.data()) m = std::min(m, x);
    return m;
}

void require_finite(const Matrix& a, const char* context) {
    if (!a.is_finite()) {
        throw shape_error(std::string(context) + ": non-finite entry");
    }
}

}  // namespace mlorc
