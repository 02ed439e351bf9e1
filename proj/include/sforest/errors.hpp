#pragma once

#include <stdexcept>
#include <string>

namespace sforest {

// Bad input: violated preconditions, malformed maps, schema errors.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A required connection does not exist (disconnected free space).
class NoPathError : public std::runtime_error {
public:
    explicit NoPathError(const std::string& what) : std::runtime_error(what) {}
};

// Steiner point search region does not touch the triangulated free space.
class NoCandidateError : public std::runtime_error {
public:
    explicit NoCandidateError(const std::string& what) : std::runtime_error(what) {}
};

// Randomized generation exhausted its retry budget.
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sforest
