#pragma once

#include <stdexcept>
#include <string>

namespace twdist {

// Base for every library failure. Messages are meant for end users.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact routine was asked to handle an input above its configured limit.
class SizeLimitExceeded : public Error {
public:
    using Error::Error;
};

}  // namespace twdist
