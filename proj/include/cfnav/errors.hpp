#pragma once

#include <stdexcept>
#include <string>

namespace cfnav {

// Bad user input: config files, CLI values, scene parameters. CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SceneParamsError : ConfigError {
    explicit SceneParamsError(const std::string& msg) : ConfigError(msg) {}
};

// Everything below maps to exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownGoalError : std::runtime_error {
    explicit UnknownGoalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnreachableTargetError : std::runtime_error {
    explicit UnreachableTargetError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TrainError : std::runtime_error {
    explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cfnav
