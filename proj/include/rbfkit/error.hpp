#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace rbfkit {

// Compact %g rendering for error messages.
inline std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

enum class ErrorKind {
  kInvalidInput,
  kInvalidConfiguration,
  kDegenerateInput,
  kParse,
  kSingularSystem,
  kSingularB,
  kRankDeficientP,
  kNoConvergence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Numerical failures are the ones a caller may reasonably retry with a
  // different configuration (normalization, shape, solver).
  bool is_numerical() const {
    return kind_ == ErrorKind::kSingularSystem || kind_ == ErrorKind::kSingularB ||
           kind_ == ErrorKind::kRankDeficientP || kind_ == ErrorKind::kNoConvergence;
  }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorKind::kInvalidInput, what) {}
};

class InvalidConfiguration : public Error {
 public:
  explicit InvalidConfiguration(const std::string& what)
      : Error(ErrorKind::kInvalidConfiguration, what) {}
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error(ErrorKind::kDegenerateInput, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::kParse, what) {}
};

class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double pivot)
      : Error(ErrorKind::kSingularSystem, what), pivot_(pivot) {}

  // Magnitude of the offending pivot (or 2x2 pivot block eigenvalue).
  double pivot() const { return pivot_; }

 protected:
  SingularSystem(ErrorKind kind, const std::string& what, double pivot)
      : Error(kind, what), pivot_(pivot) {}

 private:
  double pivot_;
};

class SingularB : public SingularSystem {
 public:
  SingularB(const std::string& what, double pivot)
      : SingularSystem(ErrorKind::kSingularB, what, pivot) {}
};

class RankDeficientP : public SingularSystem {
 public:
  RankDeficientP(const std::string& what, double pivot)
      : SingularSystem(ErrorKind::kRankDeficientP, what, pivot) {}
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual, int iterations)
      : Error(ErrorKind::kNoConvergence, what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace rbfkit
