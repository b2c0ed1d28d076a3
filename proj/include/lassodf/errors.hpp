#pragma once

#include <stdexcept>
#include <string>

namespace lassodf {

struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Singular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstantColumn : std::runtime_error {
    explicit ConstantColumn(int column)
        : std::runtime_error("constant column " + std::to_string(column)), column(column) {}
    int column;
};

struct DegenerateWeight : std::runtime_error {
    explicit DegenerateWeight(int index)
        : std::runtime_error("degenerate least-squares estimate for index " + std::to_string(index)),
          index(index) {}
    int index;
};

struct MaxIterations : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InactiveGroupRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeDiscriminant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DiscontinuityDetected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientDof : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateQuantiles : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CsvParse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lassodf
