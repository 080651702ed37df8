#pragma once

#include <stdexcept>
#include <string>

namespace slicesim {

// Base for every error raised by the library. Callers that only care about
// "something in the simulator rejected the input" catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PastEvent : public Error { using Error::Error; };
class NonPositiveRate : public Error { using Error::Error; };
class InvalidParams : public Error { using Error::Error; };
class CapacityExceeded : public Error { using Error::Error; };
class NoFeasiblePlacement : public Error { using Error::Error; };
class SliceTerminated : public Error { using Error::Error; };
class EmptyActionSet : public Error { using Error::Error; };
class EmptyBatch : public Error { using Error::Error; };
class NonFiniteMdp : public Error { using Error::Error; };
class InsufficientResidual : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace slicesim
