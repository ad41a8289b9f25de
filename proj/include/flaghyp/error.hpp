#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flaghyp {

enum class Errc {
  NotPrime,
  Reducible,
  UnsupportedDegree,
  DivisionByZero,
  FieldMismatch,
  DimOutOfRange,
  AmbientMismatch,
  SizeCap,
  GeometryMismatch,
  NotPolar,
  ScalarMatrix,
  SizeMismatch,
  NotAHyperplane,
  NotQuadraticIrreducible,
  OddDimension,
  EvenDimension,
  ProportionalPair,
  NotAGenerator,
  HasEigenvalue,
  SmatFails,
  EigenvalueInBlock,
  NotASubspace,
  NotASpread,
  PropertySFails,
  NoDual,
  TagMissing,
  SearchCapExceeded,
  Parse,
  Usage,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::Reducible: return "Reducible";
    case Errc::UnsupportedDegree: return "UnsupportedDegree";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DimOutOfRange: return "DimOutOfRange";
    case Errc::AmbientMismatch: return "AmbientMismatch";
    case Errc::SizeCap: return "SizeCap";
    case Errc::GeometryMismatch: return "GeometryMismatch";
    case Errc::NotPolar: return "NotPolar";
    case Errc::ScalarMatrix: return "ScalarMatrix";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::NotAHyperplane: return "NotAHyperplane";
    case Errc::NotQuadraticIrreducible: return "NotQuadraticIrreducible";
    case Errc::OddDimension: return "OddDimension";
    case Errc::EvenDimension: return "EvenDimension";
    case Errc::ProportionalPair: return "ProportionalPair";
    case Errc::NotAGenerator: return "NotAGenerator";
    case Errc::HasEigenvalue: return "HasEigenvalue";
    case Errc::SmatFails: return "SmatFails";
    case Errc::EigenvalueInBlock: return "EigenvalueInBlock";
    case Errc::NotASubspace: return "NotASubspace";
    case Errc::NotASpread: return "NotASpread";
    case Errc::PropertySFails: return "PropertySFails";
    case Errc::NoDual: return "NoDual";
    case Errc::TagMissing: return "TagMissing";
    case Errc::SearchCapExceeded: return "SearchCapExceeded";
    case Errc::Parse: return "Parse";
    case Errc::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace flaghyp
