#pragma once
#include <stdexcept>
#include <string>

namespace stab {

struct SizeExceeded : std::runtime_error {
    explicit SizeExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct BlockOutOfRange : std::out_of_range {
    explicit BlockOutOfRange(const std::string& m) : std::out_of_range(m) {}
};
struct UnsupportedLaw : std::invalid_argument {
    explicit UnsupportedLaw(const std::string& m) : std::invalid_argument(m) {}
};
struct ExtinctTree : std::runtime_error {
    explicit ExtinctTree(const std::string& m) : std::runtime_error(m) {}
};
struct PopulationCap : std::runtime_error {
    explicit PopulationCap(const std::string& m) : std::runtime_error(m) {}
};
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& m) : std::runtime_error(m) {}
};
struct ContinuousSpace : std::logic_error {
    explicit ContinuousSpace(const std::string& m) : std::logic_error(m) {}
};
struct OddVertexCount : std::invalid_argument {
    explicit OddVertexCount(const std::string& m) : std::invalid_argument(m) {}
};
struct NoFiniteMGF : std::runtime_error {
    explicit NoFiniteMGF(const std::string& m) : std::runtime_error(m) {}
};
struct ZeroDensityAtStart : std::invalid_argument {
    explicit ZeroDensityAtStart(const std::string& m) : std::invalid_argument(m) {}
};
struct TooFewSamples : std::invalid_argument {
    explicit TooFewSamples(const std::string& m) : std::invalid_argument(m) {}
};
struct EmptyInput : std::invalid_argument {
    explicit EmptyInput(const std::string& m) : std::invalid_argument(m) {}
};
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};
struct IoError : std::runtime_error {
    explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

} // namespace stab
