#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gbary {

/// Raised for malformed or inconsistent input data (files, labels, partitions).
/// Carries the source name and 1-based line number when known.
class DataError : public std::runtime_error
{
public:
    explicit DataError(const std::string& message);
    DataError(const std::string& source, std::size_t line, const std::string& message);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_ = 0;
};

/// Raised by the resumable observation stream when no unread data remains.
class StreamExhausted : public std::runtime_error
{
public:
    StreamExhausted() : std::runtime_error("observation stream exhausted") {}
};

/// Emits a warning through the installed sink (stderr by default).
void warn(const std::string& message);

/// Replaces the warning sink; passing an empty function restores stderr.
using WarningSink = void (*)(const std::string&);
WarningSink set_warning_sink(WarningSink sink);

} // namespace gbary
