#pragma once

#include "lassodf/model.hpp"
#include "lassodf/rng.hpp"

namespace testutil {

using lassodf::Matrix;
using lassodf::Vector;

inline Matrix random_matrix(lassodf::Rng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
    }
    return m;
}

inline Matrix random_spd(lassodf::Rng& rng, int n) {
    const Matrix a = random_matrix(rng, n, n);
    return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
}

inline Matrix random_symmetric(lassodf::Rng& rng, int n) {
    const Matrix a = random_matrix(rng, n, n);
    return 0.5 * (a + a.transpose());
}

// Dataset with a sparse truth and Gaussian noise; optionally orthonormalized.
inline lassodf::Dataset random_dataset(lassodf::Rng& rng, int n, int p,
                                       int nonzero, double sigma,
                                       bool orthonormal = false) {
    lassodf::Dataset raw;
    raw.X = random_matrix(rng, n, p);
    Vector beta = Vector::Zero(p);
    for (int j = 0; j < nonzero; ++j) {
        beta[j] = (j % 2 == 0 ? 1.0 : -1.0) * (2.0 + rng.next_uniform());
    }
    lassodf::Dataset data = lassodf::standardize(raw, orthonormal);
    data.y = data.X * beta + sigma * random_matrix(rng, n, 1).col(0);
    data.y.array() -= data.y.mean();
    return data;
}

}  // namespace testutil
