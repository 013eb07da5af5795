#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sptq {

using cd = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

enum class Errc {
  NotHermitian,
  ConvergenceFailure,
  OddDimension,
  NotSkewSymmetric,
  DimensionMismatch,
  StripExceeded,
  GapClosure,
  ContourSingular,
  GridTooCoarse,
  EmptySpectrum,
  CapTooLarge,
  NotParticleHole,
  NotSymmetricBipartition,
  NoValidStrip,
  DefectivePoint,
  BandTrackingFailure,
  InvalidGeometry,
  NoConvergence,
  NonInjective,
  TooFewValues,
  NotSymmetric,
  NonUnitaryV,
  NotUnitary,
  SizeOverflow,
  NotSimpleWithin,
  VerificationFailure,
  PoleHit,
  ValidityViolated,
  InvalidCocycle,
  InvalidArgument,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& msg);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Degeneracy cluster of a sorted spectrum.
struct Cluster {
  double value = 0;
  int multiplicity = 0;
  double width = 0;
};

// Sorted (descending) entanglement spectrum. When `rel` is filled the
// values are shift + rel[i], with rel carrying full relative precision.
struct SpectrumReport {
  std::vector<double> values;
  double gap = 0;
  std::vector<Cluster> clusters;
  double shift = 0;
  std::vector<double> rel;
};

void warn(const std::string& msg);
void set_warning_sink(void (*sink)(const std::string&));

}  // namespace sptq
