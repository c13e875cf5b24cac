#pragma once

#include <stdexcept>
#include <string>

namespace qualgate {

enum class ErrorKind {
    invalid_image,
    invalid_size,
    invalid_param,
    degenerate_series,
    insufficient_samples,
    model_unavailable,
    unknown_method,
    duplicate_score,
    parse_error,
    no_crossing,
    no_voters,
    missing_artifact,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    const char* kind_name() const {
        switch (kind_) {
        case ErrorKind::invalid_image: return "InvalidImage";
        case ErrorKind::invalid_size: return "InvalidSize";
        case ErrorKind::invalid_param: return "InvalidParam";
        case ErrorKind::degenerate_series: return "DegenerateSeries";
        case ErrorKind::insufficient_samples: return "InsufficientSamples";
        case ErrorKind::model_unavailable: return "ModelUnavailable";
        case ErrorKind::unknown_method: return "UnknownMethod";
        case ErrorKind::duplicate_score: return "DuplicateScore";
        case ErrorKind::parse_error: return "ParseError";
        case ErrorKind::no_crossing: return "NoCrossing";
        case ErrorKind::no_voters: return "NoVoters";
        case ErrorKind::missing_artifact: return "MissingArtifact";
        }
        return "Error";
    }

private:
    ErrorKind kind_;
};

inline Error invalid_image(const std::string& what) { return {ErrorKind::invalid_image, what}; }
inline Error invalid_size(const std::string& what) { return {ErrorKind::invalid_size, what}; }
inline Error invalid_param(const std::string& what) { return {ErrorKind::invalid_param, what}; }
inline Error degenerate_series(const std::string& what) { return {ErrorKind::degenerate_series, what}; }
inline Error insufficient_samples(const std::string& what) { return {ErrorKind::insufficient_samples, what}; }

} // namespace qualgate
