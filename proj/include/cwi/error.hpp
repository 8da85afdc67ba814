#ifndef CWI_ERROR_HPP
#define CWI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cwi {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data (TSV corpora, sidecar files, model files).
class ParseError : public Error {
public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Missing or invalid lookup assets (manifests, corpora, pattern files).
class ResourceError : public Error {
public:
  explicit ResourceError(const std::string& msg) : Error(msg) {}
};

// Bad experiment or CLI configuration.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Training / prediction contract violations (single-class input, divergence).
class ModelError : public Error {
public:
  explicit ModelError(const std::string& msg) : Error(msg) {}
};

}  // namespace cwi

#endif  // CWI_ERROR_HPP
