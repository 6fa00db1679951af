#include "cavityflow/laplace.hpp"

#include "cavityflow/errors.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace cavityflow {
namespace {

constexpr double kPi = std::numbers::pi;

// Per-node-count tables, indexed by the cyclic index difference d = (i - j) mod n.
struct PeriodicTables {
    // Log-singular product quadrature minus the plain trapezoid log term (d != 0);
    // the bare quadrature weight R_0 at d == 0.
    std::vector<double> log_correction;
    // Spectral differentiation in the parameter.
    std::vector<double> diff;
};

PeriodicTables build_tables(int n) {
    PeriodicTables t;
    t.log_correction.resize(n);
    t.diff.resize(n);
    const int half = n / 2;
    for (int d = 0; d < n; ++d) {
        const double delta = 2.0 * kPi * d / n;
        double r = 0.0;
        for (int m = 1; m < half; ++m) r += std::cos(m * delta) / m;
        r = -(4.0 * kPi / n) * r - (4.0 * kPi / (double(n) * n)) * std::cos(half * delta);
        if (d == 0) {
            t.log_correction[d] = r;
            t.diff[d] = 0.0;
        } else {
            const double s = std::sin(kPi * d / n);
            t.log_correction[d] = r - (2.0 * kPi / n) * std::log(4.0 * s * s);
            t.diff[d] = 0.5 * (d % 2 == 0 ? 1.0 : -1.0) / std::tan(kPi * d / n);
        }
    }
    return t;
}

const PeriodicTables& tables_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<PeriodicTables>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<PeriodicTables>(build_tables(n));
    return *slot;
}

kernels::BoundarySources sources_of(const DomainSnapshot& d) {
    return {d.x().data(),  d.y().data(),      d.nx().data(),
            d.ny().data(), d.weight().data(), static_cast<std::size_t>(d.node_count())};
}

// Ratio of the smallest to the largest pivot; a cheap conditioning indicator.
double pivot_ratio(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (pivots.size() == 0) return 1.0;
    return pivots.minCoeff() / pivots.maxCoeff();
}

void require_regular(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, const char* what) {
    const double ratio = pivot_ratio(lu);
    if (!(ratio > 1e-14))
        throw SolverError(std::string(what) + " is numerically singular: pivot ratio " +
                          std::to_string(ratio) + ", reciprocal condition estimate " +
                          std::to_string(lu.rcond()));
}

}  // namespace

std::shared_ptr<const BoundaryDiscretization> BoundaryDiscretization::create(
    std::shared_ptr<const DomainSnapshot> domain, double near_spacings,
    const kernels::KernelTable& table) {
    return std::shared_ptr<const BoundaryDiscretization>(
        new BoundaryDiscretization(std::move(domain), near_spacings, table));
}

BoundaryDiscretization::BoundaryDiscretization(std::shared_ptr<const DomainSnapshot> domain,
                                               double near_spacings,
                                               const kernels::KernelTable& table)
    : domain_(std::move(domain)), table_(&table), near_spacings_(near_spacings) {
    if (!(near_spacings_ > 0.0))
        throw ValidationError("near_boundary_spacings must be positive");
    const DomainSnapshot& d = *domain_;
    const int m = d.node_count();
    // Row-major scratch so each target row is contiguous for the kernel.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> s(m, m), k(m, m);
    const kernels::Targets targets{d.x().data(), d.y().data(), static_cast<std::size_t>(m)};
    table_->assemble(targets, sources_of(d), d.log_scale(), s.data(), k.data(),
                     static_cast<std::size_t>(m));

    const double log_l0 = std::log(d.log_scale());
    const auto speed = d.speed();
    const auto weight = d.weight();
    const auto nacc = d.normal_acceleration();
    for (const CurveBlock& c : d.curves()) {
        const PeriodicTables& tab = tables_for(c.count);
        for (int i = 0; i < c.count; ++i) {
            const int gi = c.offset + i;
            for (int j = 0; j < c.count; ++j) {
                const int gj = c.offset + j;
                const int diff = (i - j + c.count) % c.count;
                if (diff == 0) {
                    s(gi, gj) = (tab.log_correction[0] +
                                 (2.0 * kPi / c.count) *
                                     (std::log(speed[gj] * speed[gj]) - 2.0 * log_l0)) *
                                speed[gj] / (4.0 * kPi);
                } else {
                    s(gi, gj) += tab.log_correction[diff] * speed[gj] / (4.0 * kPi);
                }
            }
            k(gi, gi) = -weight[gi] * nacc[gi] / (2.0 * speed[gi] * speed[gi]) / (2.0 * kPi);
        }
    }
    single_ = s;
    double_ = k;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& BoundaryDiscretization::neumann_factor() const {
    std::call_once(neumann_once_, [this] {
        const int m = size();
        const auto w = domain_->weight();
        double total = 0.0;
        for (int j = 0; j < m; ++j) total += w[j];
        Eigen::MatrixXd a = -double_;
        a.diagonal().array() += 0.5;
        for (int j = 0; j < m; ++j) a.col(j).array() += w[j] / total;
        neumann_lu_.compute(a);
        require_regular(neumann_lu_, "Neumann system");
    });
    return neumann_lu_;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& BoundaryDiscretization::dirichlet_factor() const {
    std::call_once(dirichlet_once_, [this] {
        const DomainSnapshot& d = *domain_;
        const int m = size();
        const int nb = d.body_count();
        const auto w = d.weight();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + nb, m + nb);
        a.topLeftCorner(m, m) = single_;
        for (int b = 0; b < nb; ++b) {
            const CurveBlock& c = d.curve(DomainSnapshot::curve_of_body(b));
            // Column (1/2 - K) chi_b.
            Eigen::VectorXd col = -double_.middleCols(c.offset, c.count).rowwise().sum();
            col.segment(c.offset, c.count).array() += 0.5;
            a.col(m + b).head(m) = col;
            for (int j = 0; j < c.count; ++j) a(m + b, c.offset + j) = w[c.offset + j];
        }
        dirichlet_lu_.compute(a);
        require_regular(dirichlet_lu_, "constants-plus-flux system");
    });
    return dirichlet_lu_;
}

Eigen::VectorXd BoundaryDiscretization::tangential_derivative(
    const Eigen::Ref<const Eigen::VectorXd>& values, int curve) const {
    const CurveBlock& c = domain_->curve(curve);
    const PeriodicTables& tab = tables_for(c.count);
    const auto speed = domain_->speed();
    Eigen::VectorXd out(c.count);
    for (int i = 0; i < c.count; ++i) {
        double acc = 0.0;
        for (int j = 0; j < c.count; ++j)
            acc += tab.diff[(i - j + c.count) % c.count] * values[c.offset + j];
        out[i] = c.tangent_sign * acc / speed[c.offset + i];
    }
    return out;
}

double BoundaryDiscretization::integrate(const Eigen::Ref<const Eigen::VectorXd>& values,
                                         int curve) const {
    const auto w = domain_->weight();
    int begin = 0, end = size();
    if (curve >= 0) {
        begin = domain_->curve(curve).offset;
        end = begin + domain_->curve(curve).count;
    }
    double acc = 0.0;
    for (int j = begin; j < end; ++j) acc += w[j] * values[j];
    return acc;
}

std::pair<double, int> BoundaryDiscretization::nearest_node(const Vec2& x) const {
    const auto xs = domain_->x();
    const auto ys = domain_->y();
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int j = 0; j < size(); ++j) {
        const double dx = xs[j] - x.x(), dy = ys[j] - x.y();
        const double r2 = dx * dx + dy * dy;
        if (r2 < best) {
            best = r2;
            arg = j;
        }
    }
    return {std::sqrt(best), arg};
}

PointZone BoundaryDiscretization::classify(const Vec2& x) const {
    const auto [dist, j] = nearest_node(x);
    if ((x - domain_->node(j)).dot(domain_->normal(j)) > 0.0) return PointZone::outside;
    int curve = 0;
    while (curve + 1 < domain_->curve_count() && j >= domain_->curve(curve + 1).offset) ++curve;
    if (dist < near_spacings_ * domain_->spacing(curve)) return PointZone::near_boundary;
    return PointZone::interior;
}

void BoundaryDiscretization::require_interior(const Vec2& x) const {
    switch (classify(x)) {
        case PointZone::interior:
            return;
        case PointZone::near_boundary:
            throw EvaluationZoneError("point (" + std::to_string(x.x()) + ", " +
                                      std::to_string(x.y()) +
                                      ") lies inside the near-boundary exclusion band");
        case PointZone::outside:
            throw EvaluationZoneError("point (" + std::to_string(x.x()) + ", " +
                                      std::to_string(x.y()) + ") lies outside the fluid");
    }
}

Vec2 BoundaryDiscretization::evaluation_point(const Vec2& x, bool* clamped) const {
    if (clamped) *clamped = false;
    const PointZone zone = classify(x);
    if (zone == PointZone::interior) return x;
    if (zone == PointZone::outside) require_interior(x);
    const auto [dist, j] = nearest_node(x);
    int curve = 0;
    while (curve + 1 < domain_->curve_count() && j >= domain_->curve(curve + 1).offset) ++curve;
    if (clamped) *clamped = true;
    const double band = near_spacings_ * domain_->spacing(curve) * (1.0 + 1e-9);
    return domain_->node(j) - band * domain_->normal(j);
}

HarmonicSolution::HarmonicSolution(std::shared_ptr<const BoundaryDiscretization> disc,
                                   Eigen::VectorXd trace, Eigen::VectorXd normal_derivative,
                                   Eigen::VectorXd constants)
    : disc_(std::move(disc)),
      trace_(std::move(trace)),
      flux_(std::move(normal_derivative)),
      constants_(std::move(constants)) {
    const int m = disc_->size();
    if (trace_.size() != m || flux_.size() != m)
        throw ValidationError("harmonic solution traces do not match the node count");
    const auto w = disc_->domain().weight();
    weighted_trace_.resize(m);
    weighted_flux_.resize(m);
    for (int j = 0; j < m; ++j) {
        weighted_trace_[j] = trace_[j] * w[j];
        weighted_flux_[j] = flux_[j] * w[j];
    }
    const DomainSnapshot& d = disc_->domain();
    dtau_.resize(m);
    for (int c = 0; c < d.curve_count(); ++c)
        dtau_.segment(d.curve(c).offset, d.curve(c).count) =
            disc_->tangential_derivative(trace_, c);
}

FieldValue HarmonicSolution::eval(const Vec2& x) const {
    disc_->require_interior(x);
    FieldValue out;
    double gx = 0.0, gy = 0.0;
    eval_unchecked(&x.x(), &x.y(), 1, &out.value, &gx, &gy);
    out.gradient = {gx, gy};
    return out;
}

void HarmonicSolution::eval_unchecked(const double* x, const double* y, std::size_t n,
                                      double* value, double* gx, double* gy) const {
    const DomainSnapshot& d = disc_->domain();
    disc_->kernel_table().green_eval({x, y, n}, sources_of(d), weighted_trace_.data(),
                                     weighted_flux_.data(), d.log_scale(), value, gx, gy);
}

Vec2 HarmonicSolution::boundary_gradient(int node) const {
    const DomainSnapshot& d = disc_->domain();
    return flux_[node] * d.normal(node) + tangential_derivative()[node] * d.tangent(node);
}

HarmonicSolution solve_neumann(const std::shared_ptr<const BoundaryDiscretization>& disc,
                               const Eigen::VectorXd& flux) {
    const int m = disc->size();
    if (flux.size() != m)
        throw ValidationError("Neumann data has " + std::to_string(flux.size()) +
                              " entries, expected " + std::to_string(m));
    const double total = disc->integrate(flux);
    const double scale = disc->integrate(flux.cwiseAbs());
    if (std::abs(total) > 1e-8 * scale + 1e-14)
        throw ValidationError("Neumann data is not compatible: boundary integral " +
                              std::to_string(total));
    const double length = disc->integrate(Eigen::VectorXd::Ones(m));
    Eigen::VectorXd g = flux.array() - total / length;

    Eigen::VectorXd u = disc->neumann_factor().solve(-(disc->single_layer() * g));
    u.array() -= disc->integrate(u) / length;
    return HarmonicSolution(disc, std::move(u), std::move(g));
}

HarmonicSolution solve_dirichlet_with_constants(
    const std::shared_ptr<const BoundaryDiscretization>& disc, const Eigen::VectorXd& fluxes,
    const Eigen::VectorXd& cavity_value, const Eigen::VectorXd& inhomogeneity) {
    const DomainSnapshot& d = disc->domain();
    const int m = disc->size();
    const int nb = d.body_count();
    if (fluxes.size() != nb)
        throw ValidationError("expected " + std::to_string(nb) + " body fluxes, got " +
                              std::to_string(fluxes.size()));
    for (const Eigen::VectorXd* v : {&cavity_value, &inhomogeneity})
        if (v->size() != 0 && v->size() != m)
            throw ValidationError("boundary data must have one entry per node");

    Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
    const CurveBlock& wall = d.curve(0);
    if (cavity_value.size() != 0)
        f.segment(wall.offset, wall.count) = cavity_value.segment(wall.offset, wall.count);
    if (inhomogeneity.size() != 0)
        f.tail(m - wall.count) = inhomogeneity.tail(m - wall.count);

    Eigen::VectorXd rhs(m + nb);
    rhs.head(m) = disc->double_layer() * f - 0.5 * f;
    rhs.tail(nb) = fluxes;
    const Eigen::VectorXd sol = disc->dirichlet_factor().solve(rhs);

    Eigen::VectorXd constants = sol.tail(nb);
    Eigen::VectorXd u = f;
    for (int b = 0; b < nb; ++b) {
        const CurveBlock& c = d.curve(DomainSnapshot::curve_of_body(b));
        u.segment(c.offset, c.count).array() += constants[b];
    }
    return HarmonicSolution(disc, std::move(u), sol.head(m), std::move(constants));
}

void evaluate_layers(const BoundaryDiscretization& disc, const Eigen::VectorXd& trace,
                     const Eigen::VectorXd& normal_derivative, const double* x, const double* y,
                     std::size_t n, double* value, double* gx, double* gy) {
    const DomainSnapshot& d = disc.domain();
    const auto w = d.weight();
    Eigen::VectorXd a(disc.size()), b(disc.size());
    for (int j = 0; j < disc.size(); ++j) {
        a[j] = trace[j] * w[j];
        b[j] = normal_derivative[j] * w[j];
    }
    disc.kernel_table().green_eval({x, y, n}, sources_of(d), a.data(), b.data(), d.log_scale(),
                                   value, gx, gy);
}

Eigen::VectorXd tangential_derivative(const HarmonicSolution& sol, int curve) {
    const CurveBlock& c = sol.discretization().domain().curve(curve);
    return sol.tangential_derivative().segment(c.offset, c.count);
}

}  // namespace cavityflow
