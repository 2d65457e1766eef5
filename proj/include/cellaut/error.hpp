#ifndef cellaut_error_hpp
#define cellaut_error_hpp

#include <stdexcept>
#include <string>

namespace cellaut {

// Base of every domain error raised by the library. The CLI maps these to exit code 1.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A rule number, table or word that does not fit the declared alphabet/span.
class encoding_error : public error {
public:
    using error::error;
};

// Malformed textual input. position is a 0-based character offset when known.
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t position)
        : error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class length_error : public error {
public:
    using error::error;
};

// The requested configuration space or rule space exceeds the configured budget.
class capacity_error : public error {
public:
    using error::error;
};

class unsupported_error : public error {
public:
    using error::error;
};

} // namespace cellaut

#endif
