#pragma once

#include <stdexcept>
#include <string>

namespace acbench {

// Error taxonomy shared by the library and the CLI. Grouped by exit-code
// class: validation (2), numeric (3), io (4).
enum class ErrorKind {
    Schema,
    EmptyInput,
    NoWeatherCoverage,
    MissingCompressorId,
    NoQualifiedRooms,
    TooFewRows,
    TooFewSegments,
    TooFewResiduals,
    ZeroActual,
    AllStructuresFailed,
    KExceedsN,
    SingleCluster,
    EmptySample,
    NoOverlap,
    SampleSizeMismatch,
    UnknownFactor,
    InvalidSpec,
    Io,
    Numeric,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    const char* kind_name() const noexcept { return kind_name(kind_); }

    static const char* kind_name(ErrorKind k) noexcept {
        switch (k) {
            case ErrorKind::Schema: return "schema_error";
            case ErrorKind::EmptyInput: return "empty_input";
            case ErrorKind::NoWeatherCoverage: return "no_weather_coverage";
            case ErrorKind::MissingCompressorId: return "missing_compressor_id";
            case ErrorKind::NoQualifiedRooms: return "no_qualified_rooms";
            case ErrorKind::TooFewRows: return "too_few_rows";
            case ErrorKind::TooFewSegments: return "too_few_segments";
            case ErrorKind::TooFewResiduals: return "too_few_residuals";
            case ErrorKind::ZeroActual: return "zero_actual";
            case ErrorKind::AllStructuresFailed: return "all_structures_failed";
            case ErrorKind::KExceedsN: return "k_exceeds_n";
            case ErrorKind::SingleCluster: return "single_cluster";
            case ErrorKind::EmptySample: return "empty_sample";
            case ErrorKind::NoOverlap: return "no_overlap";
            case ErrorKind::SampleSizeMismatch: return "sample_size_mismatch";
            case ErrorKind::UnknownFactor: return "unknown_factor";
            case ErrorKind::InvalidSpec: return "invalid_spec";
            case ErrorKind::Io: return "io_error";
            case ErrorKind::Numeric: return "numeric_error";
        }
        return "error";
    }

    // Process exit code class for the CLI. 2 validation, 3 numeric, 4 I/O.
    int exit_code() const noexcept {
        switch (kind_) {
            case ErrorKind::Io: return 4;
            case ErrorKind::Numeric:
            case ErrorKind::AllStructuresFailed: return 3;
            default: return 2;
        }
    }

private:
    ErrorKind kind_;
};

}  // namespace acbench
