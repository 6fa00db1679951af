#include "cavityflow/flows.hpp"

#include "cavityflow/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavityflow {

Vec2 rigid_field_at_node(const DomainSnapshot& domain, int k, int node) {
    const int curve = DomainSnapshot::curve_of_body(k / 3);
    const CurveBlock& c = domain.curve(curve);
    if (node < c.offset || node >= c.offset + c.count) return Vec2::Zero();
    return rigid_field(domain.configuration(), k, curve, domain.node(node));
}

Eigen::MatrixXd rigid_normal_traces(const DomainSnapshot& domain) {
    const int dof = 3 * domain.body_count();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(domain.node_count(), dof);
    for (int k = 0; k < dof; ++k) {
        const CurveBlock& c = domain.curve(DomainSnapshot::curve_of_body(k / 3));
        for (int j = c.offset; j < c.offset + c.count; ++j)
            out(j, k) = rigid_field_at_node(domain, k, j).dot(domain.normal(j));
    }
    return out;
}

std::vector<HarmonicSolution> kirchhoff_basis(
    const std::shared_ptr<const BoundaryDiscretization>& disc) {
    const Eigen::MatrixXd traces = rigid_normal_traces(disc->domain());
    std::vector<HarmonicSolution> out;
    out.reserve(traces.cols());
    for (int k = 0; k < traces.cols(); ++k) out.push_back(solve_neumann(disc, traces.col(k)));
    return out;
}

CirculationBasis circulation_basis(const std::shared_ptr<const BoundaryDiscretization>& disc) {
    const int nb = disc->domain().body_count();
    CirculationBasis out;
    out.constants.resize(nb, nb);
    for (int b = 0; b < nb; ++b) {
        Eigen::VectorXd flux = Eigen::VectorXd::Zero(nb);
        flux[b] = -1.0;
        out.streams.push_back(solve_dirichlet_with_constants(disc, flux));
        out.constants.row(b) = out.streams.back().constants().transpose();
    }
    return out;
}

VorticityStream vorticity_stream(const std::shared_ptr<const BoundaryDiscretization>& disc,
                                 const VortexParticleSet& particles) {
    const DomainSnapshot& d = disc->domain();
    const int m = d.node_count();
    const int nb = d.body_count();
    if (particles.empty()) {
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
        return {particles, HarmonicSolution(disc, zero, zero, Eigen::VectorXd::Zero(nb)),
                Eigen::VectorXd::Zero(nb), zero};
    }
    for (std::size_t p = 0; p < particles.size(); ++p)
        if (disc->classify(particles.position(p)) == PointZone::outside)
            disc->require_interior(particles.position(p));

    // Point-vortex stream (1/2pi) sum w ln|x - x_p| and its normal derivative at the nodes.
    Eigen::VectorXd value = Eigen::VectorXd::Zero(m), dn = Eigen::VectorXd::Zero(m);
    const double inv2pi = 0.5 / std::numbers::pi;
    for (int j = 0; j < m; ++j) {
        for (std::size_t p = 0; p < particles.size(); ++p) {
            const double rx = d.x()[j] - particles.x()[p];
            const double ry = d.y()[j] - particles.y()[p];
            const double r2 = rx * rx + ry * ry;
            const double w = particles.weights()[p] * inv2pi;
            value[j] += 0.5 * w * std::log(r2);
            dn[j] += w * (rx * d.nx()[j] + ry * d.ny()[j]) / r2;
        }
    }
    // The point-vortex flux through each body curve vanishes (the particle is outside it),
    // so the correction carries zero flux too.
    Eigen::VectorXd minus = -value;
    HarmonicSolution correction =
        solve_dirichlet_with_constants(disc, Eigen::VectorXd::Zero(nb), minus, minus);
    Eigen::VectorXd constants = correction.constants();
    Eigen::VectorXd total_dn = dn + correction.normal_derivative();
    return {particles, std::move(correction), std::move(constants), std::move(total_dn)};
}

FlowBasis::FlowBasis(std::shared_ptr<const BoundaryDiscretization> disc,
                     const VortexParticleSet& particles, bool with_circulation)
    : disc_(std::move(disc)),
      kirchhoff_(kirchhoff_basis(disc_)),
      normal_traces_(rigid_normal_traces(disc_->domain())),
      vorticity_(vorticity_stream(disc_, particles)) {
    if (with_circulation) circulation_ = circulation_basis(disc_);
}

const CirculationBasis& FlowBasis::circulation() const {
    if (!circulation_) throw std::logic_error("flow basis was built without circulation streams");
    return *circulation_;
}

Eigen::VectorXd FlowBasis::stream_normal_derivative(const Eigen::VectorXd& gamma) const {
    Eigen::VectorXd out = vorticity_.normal_derivative;
    if (gamma.size() != domain().body_count())
        throw ValidationError("circulation vector has the wrong length");
    if (gamma.isZero(0.0)) return out;
    const auto& streams = circulation().streams;
    for (int b = 0; b < gamma.size(); ++b) out += gamma[b] * streams[b].normal_derivative();
    return out;
}

void FlowBasis::harmonic_velocity(const Eigen::VectorXd& qp, const Eigen::VectorXd& gamma,
                                  const double* x, const double* y, std::size_t n, double* ux,
                                  double* uy) const {
    const int m = domain().node_count();
    if (qp.size() != dof()) throw ValidationError("velocity vector has the wrong length");
    Eigen::VectorXd pot_trace = Eigen::VectorXd::Zero(m), pot_flux = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < dof(); ++k) {
        if (qp[k] == 0.0) continue;
        pot_trace += qp[k] * kirchhoff_[k].trace();
        pot_flux += qp[k] * kirchhoff_[k].normal_derivative();
    }
    Eigen::VectorXd st_trace = vorticity_.correction.trace();
    Eigen::VectorXd st_flux = vorticity_.correction.normal_derivative();
    if (!gamma.isZero(0.0)) {
        const auto& streams = circulation().streams;
        for (int b = 0; b < gamma.size(); ++b) {
            st_trace += gamma[b] * streams[b].trace();
            st_flux += gamma[b] * streams[b].normal_derivative();
        }
    }
    std::vector<double> value(n), gx(n), gy(n), sx(n), sy(n);
    evaluate_layers(*disc_, pot_trace, pot_flux, x, y, n, value.data(), gx.data(), gy.data());
    evaluate_layers(*disc_, st_trace, st_flux, x, y, n, value.data(), sx.data(), sy.data());
    for (std::size_t i = 0; i < n; ++i) {
        ux[i] = gx[i] - sy[i];
        uy[i] = gy[i] + sx[i];
    }
}

Vec2 total_velocity(const FlowBasis& basis, const Eigen::VectorXd& qp,
                    const Eigen::VectorXd& gamma, const Vec2& x) {
    basis.discretization().require_interior(x);
    double ux = 0.0, uy = 0.0;
    basis.harmonic_velocity(qp, gamma, &x.x(), &x.y(), 1, &ux, &uy);
    const VortexParticleSet& particles = basis.vorticity().particles;
    if (!particles.empty()) {
        const double d = particles.blob_radius();
        double bx = 0.0, by = 0.0;
        basis.discretization().kernel_table().blob_velocity(
            {&x.x(), &x.y(), 1}, particles.x().data(), particles.y().data(),
            particles.weights().data(), particles.size(), d * d, &bx, &by);
        ux += bx;
        uy += by;
    }
    return {ux, uy};
}

}  // namespace cavityflow
