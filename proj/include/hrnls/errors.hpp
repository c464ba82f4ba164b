#pragma once

#include <stdexcept>
#include <string>

namespace hrnls {

/// Base class for every failure raised by the solver library.
class SolverError : public std::runtime_error {
public:
    SolverError(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    /// Short machine-readable tag, e.g. "MeshTangled".
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// A mesh with a non-positive cell width was produced or supplied.
class MeshTangled : public SolverError {
public:
    explicit MeshTangled(const std::string& what) : SolverError("MeshTangled", what) {}
};

class InvalidMesh : public SolverError {
public:
    explicit InvalidMesh(const std::string& what) : SolverError("InvalidMesh", what) {}
};

class NoConvergence : public SolverError {
public:
    explicit NoConvergence(const std::string& what) : SolverError("NoConvergence", what) {}
};

class NewtonDiverged : public SolverError {
public:
    explicit NewtonDiverged(const std::string& what) : SolverError("NewtonDiverged", what) {}
};

class SingularJacobian : public SolverError {
public:
    explicit SingularJacobian(const std::string& what)
        : SolverError("SingularJacobian", what) {}
};

class StepsizeUnderflow : public SolverError {
public:
    explicit StepsizeUnderflow(const std::string& what)
        : SolverError("StepsizeUnderflow", what) {}
};

class InitialisationFailed : public SolverError {
public:
    InitialisationFailed(const std::string& what, double closest_eta)
        : SolverError("InitialisationFailed", what), closest_eta_(closest_eta) {}

    double closest_eta() const noexcept { return closest_eta_; }

private:
    double closest_eta_;
};

/// Bad configuration key or value. `key()` is the dotted key path.
class ConfigError : public SolverError {
public:
    ConfigError(std::string key, const std::string& reason)
        : SolverError("ConfigError", key.empty() ? reason : key + ": " + reason),
          key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public SolverError {
public:
    explicit IoError(const std::string& what) : SolverError("IoError", what) {}
};

} // namespace hrnls
