#ifndef QOC_LINALG_HPP
#define QOC_LINALG_HPP

#include <cstddef>
#include <vector>

// Dense helpers for the small systems in this library (KKT solves with
// N up to a few hundred, eigenvalue checks with N <= 64).

namespace qoc::linalg {

/// Row-major dense matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// y = A x.
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

/// Solve A x = b by LU with partial pivoting. Returns false when a pivot
/// falls below tiny * max|A| (matrix numerically singular); x is then
/// unspecified.
bool lu_solve(Matrix a, std::vector<double> b, std::vector<double>& x,
              double tiny = 1e-13);

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method,
/// ascending order.
std::vector<double> symmetric_eigenvalues(Matrix a, int max_sweeps = 64);

double frobenius_norm(const Matrix& a);

/// Max absolute row sum.
double inf_norm(const Matrix& a);

}  // namespace qoc::linalg

#endif
