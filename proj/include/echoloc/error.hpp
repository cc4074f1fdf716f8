#pragma once

#include <stdexcept>
#include <string>

namespace echoloc {

/// An argument lies outside the mathematical domain of an operation
/// (nonpositive imaginary part, t <= 0, a value that is not an eigenvalue, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical contract could not be honoured: enumeration did not saturate,
/// a tail bound exceeds its budget, a quadrature failed to converge.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace echoloc
