#pragma once

#include <stdexcept>
#include <string>

namespace cgw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

#define CGW_ERROR(Name, tag)                                          \
    struct Name : Error {                                             \
        using Error::Error;                                           \
        const char* kind() const noexcept override { return tag; }    \
    }

CGW_ERROR(SingularPointError, "singular_point");
CGW_ERROR(ToleranceError, "tolerance");
CGW_ERROR(PreconditionError, "precondition");
CGW_ERROR(MappingError, "mapping");
CGW_ERROR(StrongTensionError, "strong_tension_violation");
CGW_ERROR(ConvergenceError, "non_convergence");
CGW_ERROR(UndefinedDipoleError, "undefined_dipole");
CGW_ERROR(UnsupportedError, "unsupported");

#undef CGW_ERROR

// Config errors carry the offending field path.
struct ConfigError : Error {
    std::string field;
    ConfigError(std::string path, const std::string& what)
        : Error(path + ": " + what), field(std::move(path)) {}
    const char* kind() const noexcept override { return "config"; }
};

} // namespace cgw
