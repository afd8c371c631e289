#ifndef ROTODET_ERRORS_HPP
#define ROTODET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rotodet {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ROTODET_DEFINE_ERROR(NAME)                         \
    class NAME : public Error {                            \
    public:                                                \
        using Error::Error;                                \
    }

// PGM parsing
ROTODET_DEFINE_ERROR(BadMagic);
ROTODET_DEFINE_ERROR(Truncated);
ROTODET_DEFINE_ERROR(BadMaxval);

// geometry
ROTODET_DEFINE_ERROR(OutOfBounds);

// wavelet transforms
ROTODET_DEFINE_ERROR(TooManyLevels);
ROTODET_DEFINE_ERROR(ShapeMismatch);
ROTODET_DEFINE_ERROR(BadDimensions);
ROTODET_DEFINE_ERROR(UnsupportedBoundary);

// PCA
ROTODET_DEFINE_ERROR(RankTooHigh);
ROTODET_DEFINE_ERROR(TooFewSamples);

// GRNN
ROTODET_DEFINE_ERROR(EmptyTrainingSet);
ROTODET_DEFINE_ERROR(TargetOutOfRange);
ROTODET_DEFINE_ERROR(NonPositiveSpread);
ROTODET_DEFINE_ERROR(DimensionMismatch);

// Rprop training
ROTODET_DEFINE_ERROR(Divergence);

// detector
ROTODET_DEFINE_ERROR(ModelMismatch);

// eval
ROTODET_DEFINE_ERROR(TooFewPoints);

// model files and other I/O
ROTODET_DEFINE_ERROR(CorruptModel);
ROTODET_DEFINE_ERROR(IoFailure);

#undef ROTODET_DEFINE_ERROR

} // namespace rotodet

#endif
