// Double-precision BLAS entry points used by the sparse LU, backed by Eigen.
//
// Some OpenBLAS builds compute wrong dgemm/dtrsm results on AVX-512 cores.
// Symbols defined in the executable take precedence over the shared BLAS,
// so linking this file makes the factorization independent of the system
// BLAS.

#include <Eigen/Core>

#include <cctype>

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;
using MatrixMap = Eigen::Map<Matrix, 0, Eigen::OuterStride<>>;
using ConstMatrixMap = Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>;
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1>;
using VectorMap = Eigen::Map<Vector, 0, Eigen::InnerStride<>>;
using ConstVectorMap = Eigen::Map<const Vector, 0, Eigen::InnerStride<>>;

bool is(const char* flag, char c) { return std::toupper(static_cast<unsigned char>(*flag)) == c; }

// Negative BLAS increments walk the vector backwards from its last element.
const double* first(const double* x, int n, int inc) { return inc < 0 ? x + static_cast<long>(n - 1) * -inc : x; }
double* first(double* x, int n, int inc) { return inc < 0 ? x + static_cast<long>(n - 1) * -inc : x; }

}  // namespace

extern "C" {

void dgemm_(const char* transa, const char* transb, const int* m, const int* n, const int* k, const double* alpha,
            const double* a, const int* lda, const double* b, const int* ldb, const double* beta, double* c,
            const int* ldc) {
  if (*m == 0 || *n == 0) return;
  const bool ta = !is(transa, 'N');
  const bool tb = !is(transb, 'N');
  MatrixMap C(c, *m, *n, Eigen::OuterStride<>(*ldc));
  if (*beta == 0.0) {
    C.setZero();
  } else if (*beta != 1.0) {
    C *= *beta;
  }
  if (*k == 0 || *alpha == 0.0) return;
  const ConstMatrixMap A(a, ta ? *k : *m, ta ? *m : *k, Eigen::OuterStride<>(*lda));
  const ConstMatrixMap B(b, tb ? *n : *k, tb ? *k : *n, Eigen::OuterStride<>(*ldb));
  if (!ta && !tb) {
    C.noalias() += *alpha * A * B;
  } else if (ta && !tb) {
    C.noalias() += *alpha * A.transpose() * B;
  } else if (!ta && tb) {
    C.noalias() += *alpha * A * B.transpose();
  } else {
    C.noalias() += *alpha * A.transpose() * B.transpose();
  }
}

void dgemv_(const char* trans, const int* m, const int* n, const double* alpha, const double* a, const int* lda,
            const double* x, const int* incx, const double* beta, double* y, const int* incy) {
  const bool t = !is(trans, 'N');
  const int lx = t ? *m : *n;
  const int ly = t ? *n : *m;
  if (ly == 0) return;
  VectorMap Y(first(y, ly, *incy), ly, Eigen::InnerStride<>(*incy));
  if (*beta == 0.0) {
    Y.setZero();
  } else if (*beta != 1.0) {
    Y *= *beta;
  }
  if (lx == 0 || *alpha == 0.0) return;
  const ConstMatrixMap A(a, *m, *n, Eigen::OuterStride<>(*lda));
  const ConstVectorMap X(first(x, lx, *incx), lx, Eigen::InnerStride<>(*incx));
  if (t) {
    Y.noalias() += *alpha * A.transpose() * X;
  } else {
    Y.noalias() += *alpha * A * X;
  }
}

void dger_(const int* m, const int* n, const double* alpha, const double* x, const int* incx, const double* y,
           const int* incy, double* a, const int* lda) {
  if (*m == 0 || *n == 0 || *alpha == 0.0) return;
  MatrixMap A(a, *m, *n, Eigen::OuterStride<>(*lda));
  const ConstVectorMap X(first(x, *m, *incx), *m, Eigen::InnerStride<>(*incx));
  const ConstVectorMap Y(first(y, *n, *incy), *n, Eigen::InnerStride<>(*incy));
  A.noalias() += *alpha * X * Y.transpose();
}

void dtrsv_(const char* uplo, const char* trans, const char* diag, const int* n, const double* a, const int* lda,
            double* x, const int* incx) {
  if (*n == 0) return;
  const ConstMatrixMap A(a, *n, *n, Eigen::OuterStride<>(*lda));
  Vector X = VectorMap(first(x, *n, *incx), *n, Eigen::InnerStride<>(*incx));
  const bool lower = is(uplo, 'L');
  const bool t = !is(trans, 'N');
  const bool unit = is(diag, 'U');
  if (lower && !unit) {
    t ? A.triangularView<Eigen::Lower>().transpose().solveInPlace(X) : A.triangularView<Eigen::Lower>().solveInPlace(X);
  } else if (lower) {
    t ? A.triangularView<Eigen::UnitLower>().transpose().solveInPlace(X)
      : A.triangularView<Eigen::UnitLower>().solveInPlace(X);
  } else if (!unit) {
    t ? A.triangularView<Eigen::Upper>().transpose().solveInPlace(X) : A.triangularView<Eigen::Upper>().solveInPlace(X);
  } else {
    t ? A.triangularView<Eigen::UnitUpper>().transpose().solveInPlace(X)
      : A.triangularView<Eigen::UnitUpper>().solveInPlace(X);
  }
  VectorMap(first(x, *n, *incx), *n, Eigen::InnerStride<>(*incx)) = X;
}

void dtrsm_(const char* side, const char* uplo, const char* transa, const char* diag, const int* m, const int* n,
            const double* alpha, const double* a, const int* lda, double* b, const int* ldb) {
  if (*m == 0 || *n == 0) return;
  MatrixMap B(b, *m, *n, Eigen::OuterStride<>(*ldb));
  if (*alpha == 0.0) {
    B.setZero();
    return;
  }
  if (*alpha != 1.0) B *= *alpha;
  const bool left = is(side, 'L');
  const int ka = left ? *m : *n;
  const ConstMatrixMap A(a, ka, ka, Eigen::OuterStride<>(*lda));
  const bool lower = is(uplo, 'L');
  const bool t = !is(transa, 'N');
  const bool unit = is(diag, 'U');
  // Solve op(A) X = B (left) or X op(A) = B (right) for the given triangle.
  auto run = [&](const auto& tri) {
    if (left) {
      t ? tri.transpose().solveInPlace(B) : tri.solveInPlace(B);
    } else {
      t ? tri.transpose().template solveInPlace<Eigen::OnTheRight>(B) : tri.template solveInPlace<Eigen::OnTheRight>(B);
    }
  };
  if (lower && !unit) {
    run(A.triangularView<Eigen::Lower>());
  } else if (lower) {
    run(A.triangularView<Eigen::UnitLower>());
  } else if (!unit) {
    run(A.triangularView<Eigen::Upper>());
  } else {
    run(A.triangularView<Eigen::UnitUpper>());
  }
}

}  // extern "C"
