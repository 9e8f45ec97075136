#ifndef HDMF_ERRORS_HPP
#define HDMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hdmf {

// Bad configuration: invalid hyper-parameters, malformed config file,
// unknown keys. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or missing input data: unreadable files, malformed rows beyond the
// tolerated fraction, vocabulary mismatches. CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training produced non-finite values. CLI maps this to exit code 4.
class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hdmf

#endif
