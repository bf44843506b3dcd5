#pragma once

#include <stdexcept>
#include <string>

namespace protcoord {

// Base for every failure the library reports. Violations found by
// validate() are data, not exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed network or times document. `locus` is "line N" for syntax
// errors and a JSON pointer (e.g. "/relays/2/pickup_a") for field errors.
class FormatError : public Error {
public:
    FormatError(std::string locus, const std::string& what)
        : Error(locus + ": " + what), locus_(std::move(locus)) {}
    const std::string& locus() const noexcept { return locus_; }

private:
    std::string locus_;
};

// A record refers to an id that does not exist.
class ReferenceError : public Error {
public:
    ReferenceError(std::string dangling_id, const std::string& context)
        : Error("undefined id \"" + dangling_id + "\" referenced by " + context),
          id_(std::move(dangling_id)) {}
    const std::string& dangling_id() const noexcept { return id_; }

private:
    std::string id_;
};

class TopologyError : public Error {
public:
    using Error::Error;
};

class SolveError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

class SizingError : public Error {
public:
    using Error::Error;
};

}  // namespace protcoord
