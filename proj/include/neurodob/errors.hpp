#pragma once

#include <stdexcept>
#include <string>

namespace ndob {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};
struct IoFailure : Error {
  using Error::Error;
};

// vehicle
struct SingularSpeed : Error {
  using Error::Error;
};
struct NonFiniteState : Error {
  using Error::Error;
};

// road
struct CurvatureBoundExceeded : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};

// lqr / stability
struct NotConverged : Error {
  using Error::Error;
};
struct UnstableClosedLoop : Error {
  using Error::Error;
};
struct NotSchur : Error {
  using Error::Error;
};

// nn
struct NonFiniteActivation : Error {
  using Error::Error;
};
struct NonFiniteGradient : Error {
  using Error::Error;
};
struct EmptyDataset : Error {
  using Error::Error;
};
struct DegenerateFeature : Error {
  using Error::Error;
};

// neurodob dataset building
struct MisalignedLog : Error {
  using Error::Error;
};
struct EmptyAfterFiltering : Error {
  using Error::Error;
};

// sim / eval
struct DivergedState : Error {
  using Error::Error;
};
struct LengthMismatch : Error {
  using Error::Error;
};
struct EmptySeries : Error {
  using Error::Error;
};

}  // namespace ndob
