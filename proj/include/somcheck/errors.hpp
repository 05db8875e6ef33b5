#pragma once

#include <stdexcept>
#include <string>

namespace somcheck {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedDocument : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ContextInvalid : Error { using Error::Error; };
struct ImageTooSmall : Error { using Error::Error; };
struct UnparseableResponse : Error { using Error::Error; };
struct UnknownDefectType : Error { using Error::Error; };
struct BackendUnavailable : Error { using Error::Error; };
struct DegenerateWindow : Error { using Error::Error; };
struct InvalidOp : Error { using Error::Error; };
struct MissingTruth : Error { using Error::Error; };

}  // namespace somcheck
