#pragma once

#include <stdexcept>
#include <string>

namespace ordscan {

/// A reconstructed polynomial failed the Weil-integrality or root-modulus
/// checks: either the point counts are inconsistent or a bad prime leaked in.
struct WeilViolation : std::runtime_error {
    explicit WeilViolation(const std::string& what) : std::runtime_error(what) {}
};

/// No conjugate factorization exists over the requested quadratic ring.
struct NoSplitting : std::runtime_error {
    explicit NoSplitting(const std::string& what) : std::runtime_error(what) {}
};

/// A structural invariant of the classification pipeline failed; treated as a
/// bug, never silently reclassified.
struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ordscan
