#pragma once

#include <stdexcept>
#include <string>

namespace ggbraid {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// word algebra
struct InvalidWord : Error { using Error::Error; };
struct UnsupportedGroup : Error { using Error::Error; };
struct InvalidArity : Error { using Error::Error; };

// cochains
struct InvalidPattern : Error { using Error::Error; };
struct InvalidDegree : Error { using Error::Error; };

// trajectories
struct DegenerateTether : Error { using Error::Error; };
struct GenericPositionFailure : Error { using Error::Error; };
struct ImpureBraid : Error { using Error::Error; };

// regions / model flows
struct InfeasibleEpsilon : Error {
    InfeasibleEpsilon(const std::string& msg, double lo, double hi)
        : Error(msg), feasible_min(lo), feasible_max(hi) {}
    double feasible_min;
    double feasible_max;
};
struct InvalidGenerator : Error { using Error::Error; };
struct BadPointNoPrediction : Error { using Error::Error; };

// estimator / cli
struct GroupMismatch : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

}  // namespace ggbraid
