#ifndef LRA_ERROR_HPP
#define LRA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lra {

/// Base class for failures raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: unreadable files, malformed lines, mismatched artifacts.
/// The CLI maps these to exit status 2.
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace lra

#endif
