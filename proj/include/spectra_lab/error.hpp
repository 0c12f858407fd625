#pragma once

#include <stdexcept>
#include <string>

namespace spectra_lab {

enum class errc {
    input,              // malformed or out-of-domain argument
    capacity,           // enumeration would exceed the word budget
    junction_forbidden, // concatenation across a forbidden transition
    precondition,       // operation not applicable to this object
    indeterminate,      // certified bounds cannot decide the question
    internal            // self-check failed
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::input: return "input";
    case errc::capacity: return "capacity";
    case errc::junction_forbidden: return "junction-forbidden";
    case errc::precondition: return "precondition";
    case errc::indeterminate: return "indeterminate";
    case errc::internal: return "internal";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace spectra_lab
