#include "gbary/error.hpp"

#include <atomic>
#include <iostream>

namespace gbary {

namespace {

void stderr_sink(const std::string& message)
{
    std::cerr << "[gbary] warning: " << message << '\n';
}

std::atomic<WarningSink> g_sink{&stderr_sink};

std::string located(const std::string& source, std::size_t line, const std::string& message)
{
    std::string out = source;
    if (line > 0)
        out += ":" + std::to_string(line);
    if (!out.empty())
        out += ": ";
    return out + message;
}

} // namespace

DataError::DataError(const std::string& message) : std::runtime_error(message) {}

DataError::DataError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(located(source, line, message)), source_(source), line_(line)
{
}

void warn(const std::string& message)
{
    g_sink.load()(message);
}

WarningSink set_warning_sink(WarningSink sink)
{
    return g_sink.exchange(sink ? sink : &stderr_sink);
}

} // namespace gbary
