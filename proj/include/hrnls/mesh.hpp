#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hrnls {

/// Ordered 1D node set x_0 < x_1 < ... < x_N with fixed endpoints.
///
/// The constructor validates strict monotonicity; an invalid node list throws
/// InvalidMesh (unsorted input) or MeshTangled (non-positive cell width).
class Mesh {
public:
    /// Single cell [0, 1].
    Mesh() : nodes_{0.0, 1.0} {}
    explicit Mesh(std::vector<double> nodes);

    static Mesh uniform(double left, double right, std::size_t cells);

    /// Number of cells N.
    std::size_t cells() const noexcept { return nodes_.size() - 1; }
    /// Number of nodes N+1.
    std::size_t size() const noexcept { return nodes_.size(); }

    double operator[](std::size_t i) const noexcept { return nodes_[i]; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    const std::vector<double>& vector() const noexcept { return nodes_; }

    double left() const noexcept { return nodes_.front(); }
    double right() const noexcept { return nodes_.back(); }
    double width() const noexcept { return right() - left(); }

    /// h_i = x_i - x_{i-1}, i = 1..N, stored at index i-1.
    std::vector<double> widths() const;

    bool operator==(const Mesh&) const = default;

private:
    std::vector<double> nodes_;
};

std::vector<double> cell_widths(const Mesh& mesh);

/// Nodal values of the real (u) and imaginary (v) parts of psi.
struct FieldPair {
    std::vector<double> u;
    std::vector<double> v;

    FieldPair() = default;
    explicit FieldPair(std::size_t n) : u(n, 0.0), v(n, 0.0) {}
    FieldPair(std::vector<double> u_, std::vector<double> v_);

    std::size_t size() const noexcept { return u.size(); }
    void zero_boundary() noexcept;

    bool operator==(const FieldPair&) const = default;
};

/// Modulus |psi| at every node.
std::vector<double> modulus(const FieldPair& fields);

struct State {
    double t = 0.0;
    double dt = 0.0;
    Mesh mesh;
    FieldPair fields;
};

/// Throws MeshTangled if any node pair is out of order or coincident.
void check_monotone(std::span<const double> nodes);

} // namespace hrnls
