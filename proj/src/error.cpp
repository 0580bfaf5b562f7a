#include "cfx/error.hpp"

namespace cfx {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidSchema: return "InvalidSchema";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::OutOfDomainValue: return "OutOfDomainValue";
    case ErrorKind::SameAsOriginal: return "SameAsOriginal";
    case ErrorKind::DuplicateFeature: return "DuplicateFeature";
    case ErrorKind::MissingTableRow: return "MissingTableRow";
    case ErrorKind::HeaderMismatch: return "HeaderMismatch";
    case ErrorKind::ConflictingRow: return "ConflictingRow";
    case ErrorKind::BadLabel: return "BadLabel";
    case ErrorKind::ExternalTimeout: return "ExternalTimeout";
    case ErrorKind::ExternalProtocolError: return "ExternalProtocolError";
    case ErrorKind::ExternalBadLabel: return "ExternalBadLabel";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownFeature: return "UnknownFeature";
    case ErrorKind::OperatorOnUnorderedFeature: return "OperatorOnUnorderedFeature";
    case ErrorKind::MissingDefault: return "MissingDefault";
    case ErrorKind::InvalidConstraint: return "InvalidConstraint";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::MissingBucketSpec: return "MissingBucketSpec";
    case ErrorKind::NameCollision: return "NameCollision";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::NothingToExplain: return "NothingToExplain";
    case ErrorKind::ConflictingSampleLabels: return "ConflictingSampleLabels";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorKind::NotSerializable: return "NotSerializable";
    case ErrorKind::UnsupportedMode: return "UnsupportedMode";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace cfx
