#pragma once

#include <stdexcept>
#include <string>

namespace lep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what = "dimension mismatch") : Error(what) {}
};

/// Malformed input data (bad files, bad type strings, affine forms, ...).
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

class NotPointed : public Error {
public:
    explicit NotPointed(const std::string& what = "cone is not pointed") : Error(what) {}
};

class TooLarge : public Error {
public:
    explicit TooLarge(const std::string& what) : Error(what) {}
};

/// The union of a partial order with induced chains contains a cycle.
class CyclicRefinement : public Error {
public:
    explicit CyclicRefinement(const std::string& what = "refinement is cyclic") : Error(what) {}
};

class InvalidPartition : public Error {
public:
    explicit InvalidPartition(const std::string& what) : Error(what) {}
};

class NonPositiveParameter : public Error {
public:
    explicit NonPositiveParameter(const std::string& what = "parameter entries must be > 0")
        : Error(what) {}
};

class WrongType : public Error {
public:
    explicit WrongType(const std::string& what) : Error(what) {}
};

class TypeMismatch : public Error {
public:
    explicit TypeMismatch(const std::string& what) : Error(what) {}
};

class RealizationFailed : public Error {
public:
    explicit RealizationFailed(const std::string& what) : Error(what) {}
};

class WitnessOutsideCandidates : public Error {
public:
    explicit WitnessOutsideCandidates(const std::string& what) : Error(what) {}
};

class UnsupportedMode : public Error {
public:
    explicit UnsupportedMode(const std::string& what) : Error(what) {}
};

}  // namespace lep
