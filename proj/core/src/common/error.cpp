#include "rxnemb/common/error.hpp"

namespace rxnemb {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnbalancedRing: return "UnbalancedRing";
    case ErrorCode::UnbalancedParen: return "UnbalancedParen";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::ValenceUnderflow: return "ValenceUnderflow";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::BondInCycle: return "BondInCycle";
    case ErrorCode::NotSingleOrder: return "NotSingleOrder";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NoCuttableBond: return "NoCuttableBond";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::AllMaskedRow: return "AllMaskedRow";
    case ErrorCode::NotScalar: return "NotScalar";
    case ErrorCode::LayerCountMismatch: return "LayerCountMismatch";
    case ErrorCode::TooManyComponents: return "TooManyComponents";
    case ErrorCode::AllMasked: return "AllMasked";
    case ErrorCode::SingleClassCorpus: return "SingleClassCorpus";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ZeroVectorCosine: return "ZeroVectorCosine";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::TreeMatrixMismatch: return "TreeMatrixMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DataError: return "DataError";
  }
  return "UnknownError";
}

}  // namespace rxnemb
