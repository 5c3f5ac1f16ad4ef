#pragma once

#include <stdexcept>
#include <string>

namespace zetacorr {

// Error classes map one-to-one onto CLI exit codes (see harness.hpp).
enum class ErrorClass { config = 2, cache = 3, domain = 4, resource = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorClass::config, w) {}
};

struct CacheError : Error {
    explicit CacheError(const std::string& w) : Error(ErrorClass::cache, w) {}
};

struct CacheVersionError : CacheError {
    explicit CacheVersionError(const std::string& w) : CacheError(w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorClass::domain, w) {}
};

// Argument outside an evaluator's supported range (e.g. Riemann-Siegel below t = 10).
struct RangeError : DomainError {
    explicit RangeError(const std::string& w) : DomainError(w) {}
};

struct PoleError : DomainError {
    explicit PoleError(const std::string& w) : DomainError(w) {}
};

struct InsufficientSieveError : DomainError {
    explicit InsufficientSieveError(const std::string& w) : DomainError(w) {}
};

struct CoverageError : DomainError {
    explicit CoverageError(const std::string& w) : DomainError(w) {}
};

struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(ErrorClass::resource, w) {}
};

}  // namespace zetacorr
