#include "lassodf/numkit.hpp"

#include <cmath>

namespace lassodf::numkit {

namespace {

void require_symmetric(const Matrix& S, double rel_tol) {
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
    if (asym > rel_tol * scale) {
        throw std::invalid_argument("matrix is not symmetric within tolerance");
    }
}

Eigen::LLT<Matrix> checked_llt(const Matrix& G) {
    require_symmetric(G, 1e-12);
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("Cholesky factorization failed");
    }
    const double max_diag = G.diagonal().maxCoeff();
    const Vector l_diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < l_diag.size(); ++i) {
        if (l_diag[i] * l_diag[i] <= 1e-14 * max_diag) {
            throw NotPositiveDefinite("pivot below tolerance at index " + std::to_string(i));
        }
    }
    return llt;
}

}  // namespace

Vector cholesky_solve(const Matrix& G, const Vector& rhs) {
    return checked_llt(G).solve(rhs);
}

Matrix cholesky_solve(const Matrix& G, const Matrix& rhs) {
    return checked_llt(G).solve(rhs);
}

Vector qr_least_squares(const Matrix& X, const Vector& y) {
    if (X.rows() < X.cols()) {
        throw RankDeficient("fewer rows than columns");
    }
    Eigen::HouseholderQR<Matrix> qr(X);
    const Matrix& qrm = qr.matrixQR();
    const double scale = X.norm();
    for (Eigen::Index i = 0; i < X.cols(); ++i) {
        if (std::abs(qrm(i, i)) <= 1e-10 * scale) {
            throw RankDeficient("rank-deficient design, column " + std::to_string(i));
        }
    }
    return qr.solve(y);
}

EigResult sym_eig(const Matrix& S) {
    require_symmetric(S, 1e-10);
    const Matrix sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw NoConvergence("symmetric eigensolver did not converge");
    }
    // Eigen returns ascending order; flip to descending.
    const Eigen::Index n = sym.rows();
    EigResult out;
    out.values = es.eigenvalues().reverse();
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

double trace_of_solve(const Matrix& M, const Matrix& N) {
    Eigen::PartialPivLU<Matrix> lu(M);
    const double scale = M.cwiseAbs().maxCoeff();
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-14 * std::max(1.0, scale)) {
        throw Singular("matrix numerically singular in trace_of_solve");
    }
    return lu.solve(N).trace();
}

}  // namespace lassodf::numkit
