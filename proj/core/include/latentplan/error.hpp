#pragma once

#include <stdexcept>
#include <string>

namespace latentplan {

// Base class for every error thrown by this library. Callers that do not
// care about the precise failure mode can catch this single type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LATENTPLAN_DEFINE_ERROR(Name)     \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// Task-world violations.
LATENTPLAN_DEFINE_ERROR(InvalidStateError);   // state breaks a world invariant
LATENTPLAN_DEFINE_ERROR(IllegalActionError);  // action not applicable in state
LATENTPLAN_DEFINE_ERROR(UnknownWorldError);   // unrecognised world name

// Shape / data problems.
LATENTPLAN_DEFINE_ERROR(DimensionMismatchError);
LATENTPLAN_DEFINE_ERROR(EmptyInputError);
LATENTPLAN_DEFINE_ERROR(DegenerateDataError);  // e.g. PCA on rank-deficient data
LATENTPLAN_DEFINE_ERROR(ZeroVectorError);      // cosine similarity of a zero vector
LATENTPLAN_DEFINE_ERROR(NoSimilarPairsError);  // contrastive batch without s=1 pairs

// Model lifecycle.
LATENTPLAN_DEFINE_ERROR(NotFittedError);
LATENTPLAN_DEFINE_ERROR(DivergedError);  // non-finite loss during training

// Clustering / roadmap.
LATENTPLAN_DEFINE_ERROR(TooFewPointsError);
LATENTPLAN_DEFINE_ERROR(NoClustersError);   // everything labelled noise
LATENTPLAN_DEFINE_ERROR(EmptyRoadmapError);

// Configuration and files.
LATENTPLAN_DEFINE_ERROR(ConfigError);
LATENTPLAN_DEFINE_ERROR(IoError);

#undef LATENTPLAN_DEFINE_ERROR

}  // namespace latentplan
