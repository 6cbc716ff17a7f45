#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cxga {

/// Malformed TSPLIB input. The message names the offending line.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A tour that is not a permutation of 1..n, or an instance that cannot exist.
class InvalidTour : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InvalidInstance : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Rejected GA / HRX / experiment configuration; raised before any work starts.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (clamped splits, ignored keys). Tests swap the sink.
using WarningSink = std::function<void(std::string_view)>;

inline WarningSink& warning_sink() {
    static WarningSink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

inline void warn(std::string_view msg) {
    if (auto& sink = warning_sink()) sink(msg);
}

} // namespace cxga
