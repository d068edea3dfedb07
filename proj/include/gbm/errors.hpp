#ifndef GBM_ERRORS_HPP
#define GBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gbm {

// Thrown when a numerical evaluation cannot meet its accuracy contract
// (series non-convergence, quadrature failure, loss of significance).
// Precondition violations use std::invalid_argument instead.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gbm

#endif
