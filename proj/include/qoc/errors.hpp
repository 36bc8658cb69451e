#ifndef QOC_ERRORS_HPP
#define QOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qoc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An AR characteristic root lies on or outside the unit circle.
struct NonStationaryError : Error {
    using Error::Error;
};

/// An autocovariance sequence is too short for the requested matrix size.
struct InsufficientLagsError : Error {
    using Error::Error;
};

/// Trajectory or coefficient lengths do not match the pulse sequence.
struct LengthMismatchError : Error {
    using Error::Error;
};

/// Power normalization requested on a model with zero process variance.
struct ZeroPowerModelError : Error {
    using Error::Error;
};

/// Composite-pulse phase arccos(theta_Q / 4pi) is undefined.
struct PhaseUndefinedError : Error {
    using Error::Error;
};

/// KKT system stayed singular after ridge regularization.
struct SingularAfterRidgeError : Error {
    using Error::Error;
};

/// Optimizer initial point violates the gate-angle constraint.
struct BadInitError : Error {
    using Error::Error;
};

/// Objective became NaN or infinite during descent.
struct NonFiniteObjectiveError : Error {
    using Error::Error;
};

/// Every sampled model perturbation fell outside the stationary region.
struct AllPerturbationsNonStationaryError : Error {
    using Error::Error;
};

}  // namespace qoc

#endif
