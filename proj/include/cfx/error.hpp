#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cfx {

enum class ErrorKind {
    // core_model
    InvalidSchema,
    SchemaMismatch,
    OutOfDomainValue,
    SameAsOriginal,
    DuplicateFeature,
    // classifiers
    MissingTableRow,
    HeaderMismatch,
    ConflictingRow,
    BadLabel,
    ExternalTimeout,
    ExternalProtocolError,
    ExternalBadLabel,
    // dsl
    SyntaxError,
    UnknownFeature,
    OperatorOnUnorderedFeature,
    MissingDefault,
    InvalidConstraint,
    // encoding
    NonFiniteInput,
    MissingBucketSpec,
    NameCollision,
    EmptyData,
    RaggedRows,
    // engine
    InvalidInstance,
    NothingToExplain,
    ConflictingSampleLabels,
    EmptySample,
    SpaceTooLarge,
    // asp_export
    NotSerializable,
    UnsupportedMode,
    // io
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorKind::SyntaxError,
                std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace cfx
