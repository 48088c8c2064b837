#include "adiaudit/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "adiaudit/errors.hpp"

namespace adiaudit {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::spin_half_rotating: return "spin_half_rotating";
        case ModelKind::sampled_table: return "sampled_table";
        case ModelKind::rescaled: return "rescaled";
        case ModelKind::counterexample_b: return "counterexample_b";
    }
    return "unknown";
}

void SpinHalfParams::validate() const {
    if (!(omega0 > 0.0)) throw ParameterError("spin-half: omega0 must be positive");
    if (!(omega >= 0.0)) throw ParameterError("spin-half: omega must be nonnegative");
    if (!(theta >= 0.0 && theta <= M_PI)) throw ParameterError("spin-half: theta must lie in [0, pi]");
}

namespace {

double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

void MatrixSampleTable::validate_and_symmetrize() {
    if (times.size() != matrices.size()) throw FormatError("sample table: times and matrices sizes differ");
    if (times.size() < 2) throw FormatError("sample table: need at least 2 samples");
    const int n = dimension();
    if (n < 2) throw FormatError("sample table: dimension must be at least 2");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && !(times[i] > times[i - 1])) {
            std::ostringstream msg;
            msg << "sample table: times not strictly increasing at t = " << times[i];
            throw FormatError(msg.str());
        }
        const Matrix& m = matrices[i];
        if (m.rows() != n || m.cols() != n) {
            std::ostringstream msg;
            msg << "sample table: inconsistent dimension at t = " << times[i];
            throw FormatError(msg.str());
        }
        if (hermiticity_defect(m) > 1e-10) {
            std::ostringstream msg;
            msg << "sample table: non-Hermitian sample at t = " << times[i]
                << " (defect " << hermiticity_defect(m) << ")";
            throw FormatError(msg.str());
        }
        matrices[i] = 0.5 * (m + m.adjoint().eval());
    }
}

struct HamiltonianModel::Impl {
    ModelKind kind;
    int dim = 0;
    double t_max = 0.0;

    virtual ~Impl() = default;
    virtual Matrix value(double t) const = 0;
    virtual Matrix deriv(double t) const = 0;
    virtual const SpinHalfParams* spin() const { return nullptr; }
};

namespace {

void check_domain(double t, double t_max) {
    const double pad = 1e-9 * std::max(1.0, t_max);
    if (t < -pad || t > t_max + pad) {
        std::ostringstream msg;
        msg << "time " << t << " outside model domain [0, " << t_max << "]";
        throw ParameterError(msg.str());
    }
}

struct SpinImpl final : HamiltonianModel::Impl {
    SpinHalfParams p;

    Matrix value(double t) const override {
        const double phi = p.omega * t;
        const double s = std::sin(p.theta), c = std::cos(p.theta);
        Matrix h(2, 2);
        h(0, 0) = Complex(-0.5 * p.omega0 * c, 0.0);
        h(0, 1) = -0.5 * p.omega0 * s * std::exp(Complex(0.0, -phi));
        h(1, 0) = std::conj(h(0, 1));
        h(1, 1) = Complex(0.5 * p.omega0 * c, 0.0);
        return h;
    }

    Matrix deriv(double t) const override {
        const double phi = p.omega * t;
        const double s = std::sin(p.theta);
        Matrix h = Matrix::Zero(2, 2);
        // d/dt of -(omega0/2) s e^{-i phi} = +i (omega0/2) s omega e^{-i phi}
        h(0, 1) = Complex(0.0, 0.5 * p.omega0 * s * p.omega) * std::exp(Complex(0.0, -phi));
        h(1, 0) = std::conj(h(0, 1));
        return h;
    }

    const SpinHalfParams* spin() const override { return &p; }
};

// Piecewise Lagrange interpolation through up to 4 neighboring samples.
struct TableImpl final : HamiltonianModel::Impl {
    MatrixSampleTable table;

    // Window [first, first + count) of nodes used for time t.
    std::pair<int, int> window(double t) const {
        const auto& ts = table.times;
        const int count = static_cast<int>(ts.size());
        int seg = static_cast<int>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
        seg = std::clamp(seg, 0, count - 2);
        const int width = std::min(4, count);
        int first = std::clamp(seg - 1, 0, count - width);
        return {first, width};
    }

    template <bool Derivative>
    Matrix interpolate(double t) const {
        const auto [first, width] = window(t);
        const auto& ts = table.times;
        Matrix out = Matrix::Zero(dim, dim);
        for (int j = 0; j < width; ++j) {
            const double xj = ts[first + j];
            double denom = 1.0;
            for (int i = 0; i < width; ++i) {
                if (i != j) denom *= xj - ts[first + i];
            }
            double w;
            if constexpr (!Derivative) {
                double num = 1.0;
                for (int i = 0; i < width; ++i) {
                    if (i != j) num *= t - ts[first + i];
                }
                w = num / denom;
            } else {
                double num = 0.0;
                for (int k = 0; k < width; ++k) {
                    if (k == j) continue;
                    double prod = 1.0;
                    for (int i = 0; i < width; ++i) {
                        if (i != j && i != k) prod *= t - ts[first + i];
                    }
                    num += prod;
                }
                w = num / denom;
            }
            out += w * table.matrices[first + j];
        }
        return out;
    }

    Matrix value(double t) const override {
        Matrix h = interpolate<false>(t);
        return 0.5 * (h + h.adjoint().eval());
    }

    Matrix deriv(double t) const override {
        Matrix h = interpolate<true>(t);
        return 0.5 * (h + h.adjoint().eval());
    }
};

// base(t / T) with the chain-rule factor on the derivative.
struct StretchedImpl final : HamiltonianModel::Impl {
    std::shared_ptr<const HamiltonianModel::Impl> base;
    double factor = 1.0;  // new duration / base duration

    Matrix value(double t) const override { return base->value(t / factor); }
    Matrix deriv(double t) const override { return base->deriv(t / factor) / factor; }
    const SpinHalfParams* spin() const override { return base->spin(); }
};

}  // namespace

ModelKind HamiltonianModel::kind() const { return impl_->kind; }
int HamiltonianModel::dimension() const { return impl_->dim; }
double HamiltonianModel::t_max() const { return impl_->t_max; }
bool HamiltonianModel::has_derivative() const { return true; }
const SpinHalfParams* HamiltonianModel::spin_params() const { return impl_->spin(); }

Matrix HamiltonianModel::evaluate(double t) const {
    check_domain(t, impl_->t_max);
    return impl_->value(t);
}

Matrix HamiltonianModel::derivative(double t) const {
    check_domain(t, impl_->t_max);
    return impl_->deriv(t);
}

HamiltonianModel HamiltonianModel::spin_half(const SpinHalfParams& params, double t_max) {
    params.validate();
    if (!(t_max > 0.0)) throw ParameterError("spin-half: t_max must be positive");
    auto impl = std::make_shared<SpinImpl>();
    impl->kind = ModelKind::spin_half_rotating;
    impl->dim = 2;
    impl->t_max = t_max;
    impl->p = params;
    return HamiltonianModel(std::move(impl));
}

HamiltonianModel HamiltonianModel::from_table(MatrixSampleTable table, ModelKind kind) {
    table.validate_and_symmetrize();
    if (std::abs(table.times.front()) > 1e-12 * std::max(1.0, std::abs(table.times.back()))) {
        throw FormatError("sample table: first sample time must be 0");
    }
    auto impl = std::make_shared<TableImpl>();
    impl->kind = kind;
    impl->dim = table.dimension();
    impl->t_max = table.times.back();
    impl->table = std::move(table);
    return HamiltonianModel(std::move(impl));
}

HamiltonianModel build_spin_half(const SpinHalfParams& params, double t_max) {
    return HamiltonianModel::spin_half(params, t_max);
}

HamiltonianModel stretch_domain(const HamiltonianModel& base, double factor) {
    if (!(factor > 0.0)) throw ParameterError("stretch_domain: factor must be positive");
    auto impl = std::make_shared<StretchedImpl>();
    impl->kind = ModelKind::rescaled;
    impl->dim = base.dimension();
    impl->t_max = base.t_max() * factor;
    impl->base = base.impl_;
    impl->factor = factor;
    return HamiltonianModel(std::move(impl));
}

HamiltonianModel rescale(const HamiltonianModel& base, double T) {
    if (!(T > 0.0)) throw ParameterError("rescale: T must be positive");
    if (std::abs(base.t_max() - 1.0) > 1e-9) {
        throw ParameterError("rescale: base must be defined on [0, 1]");
    }
    return stretch_domain(base, T);
}

}  // namespace adiaudit
