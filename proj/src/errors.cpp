#include "flowres/errors.hpp"

namespace flowres {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DanglingParent: return "DanglingParent";
    case ErrorCode::LevelCycle: return "LevelCycle";
    case ErrorCode::InvalidFeatureCode: return "InvalidFeatureCode";
    case ErrorCode::UnknownRegion: return "UnknownRegion";
    case ErrorCode::UnknownCode: return "UnknownCode";
    case ErrorCode::DuplicateFlow: return "DuplicateFlow";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MissingParent: return "MissingParent";
    case ErrorCode::SelfPair: return "SelfPair";
    case ErrorCode::MissingGeometry: return "MissingGeometry";
    case ErrorCode::InvalidRing: return "InvalidRing";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::NoFlows: return "NoFlows";
    case ErrorCode::DegenerateNetwork: return "DegenerateNetwork";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::SinkWrite: return "SinkWrite";
  }
  return "Unknown";
}

}  // namespace flowres
