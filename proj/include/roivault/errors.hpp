#pragma once

#include <stdexcept>
#include <string>

namespace roivault {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// nifti-io
struct BadMagic : Error { using Error::Error; };
struct UnsupportedDatatype : Error { using Error::Error; };
struct TruncatedData : Error { using Error::Error; };
struct BadDims : Error { using Error::Error; };
struct InconsistentHeader : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };
struct NonPositiveSpacing : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct DegenerateVolume : Error { using Error::Error; };

// mask / metrics
struct DimsMismatch : Error { using Error::Error; };
struct EmptyRoi : Error { using Error::Error; };
struct NonPositivePeak : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };

// henon
struct Diverged : Error { using Error::Error; };
struct EmptyPassphrase : Error { using Error::Error; };
struct BasinExhausted : Error { using Error::Error; };

// vault
struct WrongKey : Error { using Error::Error; };
struct CorruptEntry : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace roivault
