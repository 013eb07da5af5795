#include "sptq/types.hpp"

#include <atomic>
#include <iostream>

namespace sptq {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::OddDimension: return "OddDimension";
    case Errc::NotSkewSymmetric: return "NotSkewSymmetric";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::StripExceeded: return "StripExceeded";
    case Errc::GapClosure: return "GapClosure";
    case Errc::ContourSingular: return "ContourSingular";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::EmptySpectrum: return "EmptySpectrum";
    case Errc::CapTooLarge: return "CapTooLarge";
    case Errc::NotParticleHole: return "NotParticleHole";
    case Errc::NotSymmetricBipartition: return "NotSymmetricBipartition";
    case Errc::NoValidStrip: return "NoValidStrip";
    case Errc::DefectivePoint: return "DefectivePoint";
    case Errc::BandTrackingFailure: return "BandTrackingFailure";
    case Errc::InvalidGeometry: return "InvalidGeometry";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NonInjective: return "NonInjective";
    case Errc::TooFewValues: return "TooFewValues";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NonUnitaryV: return "NonUnitaryV";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::SizeOverflow: return "SizeOverflow";
    case Errc::NotSimpleWithin: return "NotSimpleWithin";
    case Errc::VerificationFailure: return "VerificationFailure";
    case Errc::PoleHit: return "PoleHit";
    case Errc::ValidityViolated: return "ValidityViolated";
    case Errc::InvalidCocycle: return "InvalidCocycle";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc c, const std::string& msg)
    : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}

namespace {
void default_sink(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }
std::atomic<void (*)(const std::string&)> g_sink{&default_sink};
}  // namespace

void warn(const std::string& msg) { g_sink.load()(msg); }

void set_warning_sink(void (*sink)(const std::string&)) {
  g_sink.store(sink ? sink : &default_sink);
}

}  // namespace sptq
