#pragma once

#include <stdexcept>
#include <string>

namespace kingis {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside an operation's supported domain.
struct DomainError : Error {
    using Error::Error;
};

// A computation that would exceed its configured resource limits.
struct ResourceError : Error {
    using Error::Error;
};

struct InvalidShape : DomainError { using DomainError::DomainError; };
struct ShapeTooLarge : DomainError { using DomainError::DomainError; };
struct MergeWidthOutOfRange : DomainError { using DomainError::DomainError; };
struct WidthOutOfRange : DomainError { using DomainError::DomainError; };
struct NonPositiveValue : DomainError { using DomainError::DomainError; };
struct NotConcave : DomainError { using DomainError::DomainError; };
struct DegenerateFit : DomainError { using DomainError::DomainError; };
struct InsufficientData : DomainError { using DomainError::DomainError; };
struct NonMonotoneIndex : DomainError { using DomainError::DomainError; };
struct ParseError : DomainError { using DomainError::DomainError; };

struct BudgetExceeded : ResourceError { using ResourceError::ResourceError; };

struct IntegrityError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace kingis
