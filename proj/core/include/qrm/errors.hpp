#pragma once

#include <stdexcept>

namespace qrm {

/// Thrown for arguments outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace qrm
