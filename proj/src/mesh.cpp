#include "hrnls/mesh.hpp"

#include "hrnls/errors.hpp"

#include <cmath>
#include <sstream>

namespace hrnls {

void check_monotone(std::span<const double> nodes) {
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            std::ostringstream msg;
            msg << "non-positive cell width at cell " << i << " (x[" << i - 1
                << "]=" << nodes[i - 1] << ", x[" << i << "]=" << nodes[i] << ")";
            throw MeshTangled(msg.str());
        }
    }
}

Mesh::Mesh(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw InvalidMesh("a mesh needs at least two nodes");
    }
    for (double x : nodes_) {
        if (!std::isfinite(x)) throw InvalidMesh("non-finite node position");
    }
    check_monotone(nodes_);
}

Mesh Mesh::uniform(double left, double right, std::size_t cells) {
    if (cells < 1 || !(right > left)) {
        throw InvalidMesh("uniform mesh needs cells >= 1 and right > left");
    }
    std::vector<double> x(cells + 1);
    const double h = (right - left) / static_cast<double>(cells);
    for (std::size_t i = 0; i <= cells; ++i) x[i] = left + h * static_cast<double>(i);
    // exact endpoint, independent of rounding in left + N*h
    x.back() = right;
    return Mesh(std::move(x));
}

std::vector<double> Mesh::widths() const {
    std::vector<double> h(cells());
    for (std::size_t i = 1; i < nodes_.size(); ++i) h[i - 1] = nodes_[i] - nodes_[i - 1];
    return h;
}

std::vector<double> cell_widths(const Mesh& mesh) { return mesh.widths(); }

FieldPair::FieldPair(std::vector<double> u_, std::vector<double> v_)
    : u(std::move(u_)), v(std::move(v_)) {
    if (u.size() != v.size()) throw InvalidMesh("field components differ in length");
}

void FieldPair::zero_boundary() noexcept {
    if (u.empty()) return;
    u.front() = u.back() = 0.0;
    v.front() = v.back() = 0.0;
}

std::vector<double> modulus(const FieldPair& fields) {
    std::vector<double> m(fields.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::hypot(fields.u[i], fields.v[i]);
    return m;
}

} // namespace hrnls
