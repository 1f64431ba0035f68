#include "hamfactor/flow.hpp"

#include "hamfactor/errors.hpp"

namespace hamfactor {

namespace {

std::vector<double> to_double(const std::vector<Rat>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v[i].get_d();
    return out;
}

std::vector<std::vector<double>> to_double(const RatMatrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out[i][j] = m(i, j).get_d();
    return out;
}

std::vector<double> mat_vec(const std::vector<std::vector<double>>& m, const std::vector<double>& u) {
    std::vector<double> out(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j)
            out[i] += m[i][j] * u[j];
    return out;
}

} // namespace

std::vector<FlowSample> rk4_flow(const RatMatrix& b, const RatMatrix& d,
                                 const std::vector<RatMatrix>& casimir_covectors,
                                 const std::vector<Rat>& u0, double t_max, int steps) {
    if (b.rows() != b.cols() || int(u0.size()) != b.rows())
        throw ShapeError("rk4_flow: dimension mismatch");
    if (steps < 1)
        throw InputError("rk4_flow: steps must be >= 1");
    const int m = b.rows();
    const auto bd = to_double(b);
    const auto dd = to_double(d);
    std::vector<std::vector<double>> cas;
    for (const RatMatrix& c : casimir_covectors) {
        std::vector<double> cv(m);
        for (int i = 0; i < m; ++i)
            cv[i] = c(i, 0).get_d();
        cas.push_back(std::move(cv));
    }

    auto sample = [&](double t, const std::vector<double>& u) {
        FlowSample s;
        s.t = t;
        const auto du = mat_vec(dd, u);
        double h = 0;
        for (int i = 0; i < m; ++i)
            h += u[i] * du[i];
        s.hamiltonian = 0.5 * h;
        for (const auto& c : cas) {
            double v = 0;
            for (int i = 0; i < m; ++i)
                v += c[i] * u[i];
            s.casimirs.push_back(v);
        }
        return s;
    };

    std::vector<double> u = to_double(u0);
    const double h = t_max / steps;
    std::vector<FlowSample> out;
    out.reserve(steps + 1);
    out.push_back(sample(0.0, u));
    for (int step = 1; step <= steps; ++step) {
        const auto k1 = mat_vec(bd, u);
        std::vector<double> tmp(m);
        for (int i = 0; i < m; ++i)
            tmp[i] = u[i] + 0.5 * h * k1[i];
        const auto k2 = mat_vec(bd, tmp);
        for (int i = 0; i < m; ++i)
            tmp[i] = u[i] + 0.5 * h * k2[i];
        const auto k3 = mat_vec(bd, tmp);
        for (int i = 0; i < m; ++i)
            tmp[i] = u[i] + h * k3[i];
        const auto k4 = mat_vec(bd, tmp);
        for (int i = 0; i < m; ++i)
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        out.push_back(sample(step * h, u));
    }
    return out;
}

} // namespace hamfactor
