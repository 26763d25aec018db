// SPDX-License-Identifier: Apache-2.0
//
// risloc - RIS-aided mmWave indoor positioning workbench
// Copyright (C) 2026 The risloc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risloc/sage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace risloc
{

void SageConfig::validate() const
{
    if (max_mpcs < 1)
        throw std::invalid_argument("max_mpcs must be at least 1");
    if (!(energy_fraction > 0.0 && energy_fraction <= 1.0))
        throw std::invalid_argument("energy_fraction must lie in (0, 1]");
    if (!(subband_start < subband_stop))
        throw std::invalid_argument("sub-band start must precede its stop");
    if (!(delay_grid_step >= 0.0) || !(angle_grid_step > 0.0))
        throw std::invalid_argument("grid steps must be positive");
    if (!(rx_spacing > 0.0) || !(carrier > 0.0))
        throw std::invalid_argument("RX spacing and carrier must be positive");
}

ChannelTensor subband_select(const ChannelTensor &tensor, double f_lo, double f_hi)
{
    if (!(f_lo <= f_hi))
        throw std::invalid_argument("malformed sub-band interval");
    const auto &g = tensor.grid;
    const double eps = 1e-6 * g.f_step;
    const std::size_t n = tensor.n_freq();
    std::size_t first = n, last = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double f = g.freq(i);
        if (f >= f_lo - eps && f <= f_hi + eps)
        {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == n)
        throw std::invalid_argument("sub-band does not intersect the tensor grid");

    ChannelTensor out;
    out.meta = tensor.meta;
    out.grid = g;
    out.grid.f_start = g.freq(first);
    out.grid.f_stop = g.freq(last);
    if (out.grid.carrier < out.grid.f_start || out.grid.carrier > out.grid.f_stop)
        out.grid.carrier = 0.5 * (out.grid.f_start + out.grid.f_stop);
    out.values = tensor.values.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(last - first + 1));
    return out;
}

double overall_gain_db(const ChannelTensor &tensor)
{
    if (tensor.values.size() == 0)
        throw std::invalid_argument("overall gain of an empty tensor");
    const double mean_power = tensor.values.squaredNorm() / static_cast<double>(tensor.values.size());
    return 10.0 * std::log10(mean_power);
}

namespace
{

struct Component
{
    double tau = 0.0; // seconds
    double phi = 0.0; // radians
    cd alpha{0.0, 0.0};
};

// Signal model on a sub-band: s[n, p] = alpha * exp(-j 2 pi n df tau) * exp(j kc r_p . u(phi)).
class SignalModel
{
  public:
    SignalModel(std::size_t n_freq, double f_step, double rx_spacing, double carrier)
        : n_freq_(n_freq), f_step_(f_step), kc_(2.0 * kPi * carrier / kSpeedOfLight),
          offsets_(rx_grid_offsets(rx_spacing))
    {
    }

    Eigen::Index F() const { return static_cast<Eigen::Index>(n_freq_); }
    static constexpr Eigen::Index P() { return static_cast<Eigen::Index>(kRxPositions); }
    double f_step() const { return f_step_; }

    Eigen::VectorXcd delay(double tau) const
    {
        Eigen::VectorXcd b(F());
        const cd w = std::polar(1.0, -2.0 * kPi * f_step_ * tau);
        cd acc{1.0, 0.0};
        for (Eigen::Index n = 0; n < F(); ++n)
        {
            // Re-anchor periodically so the recurrence does not drift.
            if ((n & 63) == 0)
                acc = std::polar(1.0, -2.0 * kPi * f_step_ * tau * static_cast<double>(n));
            b(n) = acc;
            acc *= w;
        }
        return b;
    }

    Eigen::VectorXcd steer(double phi) const
    {
        Eigen::VectorXcd a(P());
        const double ux = std::cos(phi), uy = std::sin(phi);
        for (Eigen::Index p = 0; p < P(); ++p)
            a(p) = std::polar(1.0, kc_ * (offsets_[static_cast<std::size_t>(p)].x * ux +
                                          offsets_[static_cast<std::size_t>(p)].y * uy));
        return a;
    }

    Eigen::MatrixXcd signal(const Component &c) const
    {
        return c.alpha * delay(c.tau) * steer(c.phi).transpose();
    }

  private:
    std::size_t n_freq_;
    double f_step_;
    double kc_;
    std::array<Point2D, kRxPositions> offsets_;
};

template <typename Fn>
double golden_max(Fn &&f, double lo, double hi, double tol)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol)
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

class Sage
{
  public:
    Sage(const ChannelTensor &sub, const SageConfig &cfg)
        : cfg_(cfg), model_(sub.n_freq(), sub.grid.f_step, cfg.rx_spacing, cfg.carrier), Y_(sub.values)
    {
        const double width = static_cast<double>(sub.n_freq() - 1) * sub.grid.f_step;
        dtau_ = cfg.delay_grid_step > 0.0 ? cfg.delay_grid_step : 1.0 / (2.0 * width);
        tau_max_ = 1.0 / sub.grid.f_step;
        n_delay_ = static_cast<Eigen::Index>(std::ceil(tau_max_ / dtau_ - 1e-9));
        dphi_ = deg2rad(cfg.angle_grid_step);
        n_angle_ = static_cast<Eigen::Index>(std::llround(2.0 * kPi / dphi_));

        // Delay transform of the observation: ZY(m, p) = sum_n Y(n, p) exp(+j 2 pi n df tau_m).
        Eigen::MatrixXcd D(n_delay_, model_.F());
        for (Eigen::Index m = 0; m < n_delay_; ++m)
            D.row(m) = model_.delay(tau_at(m)).conjugate().transpose();
        ZY_.noalias() = D * Y_;

        steer_conj_.resize(SignalModel::P(), n_angle_);
        for (Eigen::Index k = 0; k < n_angle_; ++k)
            steer_conj_.col(k) = model_.steer(phi_at(k)).conjugate();
    }

    std::vector<Component> run()
    {
        const double total = Y_.squaredNorm();
        std::vector<Component> comps;
        if (!(total > 0.0))
            return comps;

        Eigen::MatrixXcd R = Y_;
        while (comps.size() < cfg_.max_mpcs)
        {
            Component c = initialize(comps, R);
            if (std::abs(c.alpha) == 0.0)
                break;
            R.noalias() -= model_.signal(c);
            comps.push_back(c);
            refine(comps, R);
            if (total - R.squaredNorm() >= cfg_.energy_fraction * total)
                break;
        }
        return comps;
    }

  private:
    double tau_at(Eigen::Index m) const { return static_cast<double>(m) * dtau_; }
    double phi_at(Eigen::Index k) const { return -kPi + static_cast<double>(k + 1) * dphi_; }

    // Dirichlet kernel sum_n exp(j 2 pi n df delta).
    cd kernel(double delta) const
    {
        const double x = kPi * model_.f_step() * delta;
        const double F = static_cast<double>(model_.F());
        const double den = std::sin(x);
        const cd phase = std::polar(1.0, x * (F - 1.0));
        if (std::abs(den) < 1e-12)
            return {F, 0.0};
        return phase * (std::sin(F * x) / den);
    }

    double cost_tau(const Eigen::VectorXcd &y, double tau) const
    {
        return std::norm(model_.delay(tau).dot(y));
    }

    double cost_phi(const Eigen::VectorXcd &z, double phi) const
    {
        return std::norm(model_.steer(phi).dot(z));
    }

    // ML update of a single component from its expectation signal x.
    void update_tau(Component &c, const Eigen::MatrixXcd &x, double half_width) const
    {
        const Eigen::VectorXcd y = x * model_.steer(c.phi).conjugate();
        const double lo = std::max(0.0, c.tau - half_width);
        const double hi = c.tau + half_width;
        c.tau = golden_max([&](double t) { return cost_tau(y, t); }, lo, hi, 1e-15);
    }

    void update_phi(Component &c, const Eigen::MatrixXcd &x, double half_width) const
    {
        const Eigen::VectorXcd z = x.transpose() * model_.delay(c.tau).conjugate();
        c.phi = golden_max([&](double p) { return cost_phi(z, p); }, c.phi - half_width, c.phi + half_width, 1e-9);
        c.phi = deg2rad(wrap180(rad2deg(c.phi)));
    }

    void update_alpha(Component &c, const Eigen::MatrixXcd &x) const
    {
        const Eigen::VectorXcd b = model_.delay(c.tau);
        const Eigen::VectorXcd a = model_.steer(c.phi);
        const cd corr = b.dot(x * a.conjugate());
        c.alpha = corr / static_cast<double>(model_.F() * SignalModel::P());
    }

    Component initialize(const std::vector<Component> &comps, const Eigen::MatrixXcd &R) const
    {
        // Delay transform of the residual from the closed form of each component's transform.
        Eigen::MatrixXcd Z = ZY_;
        for (const auto &c : comps)
        {
            const Eigen::RowVectorXcd a = c.alpha * model_.steer(c.phi).transpose();
            for (Eigen::Index m = 0; m < n_delay_; ++m)
                Z.row(m) -= kernel(tau_at(m) - c.tau) * a;
        }

        const Eigen::VectorXd row_energy = Z.rowwise().squaredNorm();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n_delay_));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
            return row_energy(i) > row_energy(j) || (row_energy(i) == row_energy(j) && i < j);
        });

        // |a^H z|^2 <= P |z|^2 bounds every angle at a delay, so the scan stops early.
        double best = -1.0;
        Component c;
        for (Eigen::Index m : order)
        {
            if (static_cast<double>(SignalModel::P()) * row_energy(m) <= best)
                break;
            const Eigen::RowVectorXcd q = Z.row(m) * steer_conj_;
            for (Eigen::Index k = 0; k < n_angle_; ++k)
            {
                const double v = std::norm(q(k));
                if (v > best)
                {
                    best = v;
                    c.tau = tau_at(m);
                    c.phi = phi_at(k);
                }
            }
        }
        if (!(best > 0.0))
            return c;

        for (std::size_t r = 0; r < cfg_.polish_rounds; ++r)
        {
            update_tau(c, R, dtau_);
            update_phi(c, R, dphi_);
        }
        update_alpha(c, R);
        return c;
    }

    void refine(std::vector<Component> &comps, Eigen::MatrixXcd &R) const
    {
        double prev = R.squaredNorm();
        for (std::size_t it = 0; it < cfg_.refinement_iters; ++it)
        {
            for (auto &c : comps)
            {
                Eigen::MatrixXcd x = R + model_.signal(c);
                update_tau(c, x, 0.5 * dtau_);
                update_phi(c, x, 0.5 * dphi_);
                update_alpha(c, x);
                R = x - model_.signal(c);
            }
            const double now = R.squaredNorm();
            if (prev <= 0.0 || std::abs(prev - now) / prev < cfg_.convergence_eps)
                break;
            prev = now;
        }
    }

    const SageConfig &cfg_;
    SignalModel model_;
    const Eigen::MatrixXcd &Y_;
    Eigen::MatrixXcd ZY_;
    Eigen::MatrixXcd steer_conj_;
    double dtau_ = 0.0, tau_max_ = 0.0, dphi_ = 0.0;
    Eigen::Index n_delay_ = 0, n_angle_ = 0;
};

} // namespace

std::vector<MpcEstimate> sage_extract(const ChannelTensor &tensor, const SageConfig &config)
{
    config.validate();
    if (tensor.n_pos() != kRxPositions)
        throw std::invalid_argument("SAGE expects a 3x3 RX grid");
    if (!tensor.values.allFinite())
        throw std::invalid_argument("tensor contains non-finite entries");
    const ChannelTensor sub = subband_select(tensor, config.subband_start, config.subband_stop);
    if (sub.n_freq() < 2)
        throw std::invalid_argument("SAGE needs at least two frequency bins");

    Sage sage(sub, config);
    const auto comps = sage.run();

    std::vector<MpcEstimate> out;
    out.reserve(comps.size());
    for (const auto &c : comps)
    {
        MpcEstimate e;
        e.ota_distance = c.tau * kSpeedOfLight;
        e.aoa_deg = wrap180(rad2deg(c.phi));
        e.gain = c.alpha;
        e.power_db = 20.0 * std::log10(std::abs(c.alpha));
        out.push_back(e);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const MpcEstimate &a, const MpcEstimate &b) { return a.power_db > b.power_db; });
    return out;
}

Eigen::MatrixXcd reconstruct(const std::vector<MpcEstimate> &mpcs, const FrequencyGrid &grid, double rx_spacing,
                             double carrier)
{
    const SignalModel model(grid.size(), grid.f_step, rx_spacing, carrier);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(model.F(), SignalModel::P());
    for (const auto &m : mpcs)
        out += model.signal({m.ota_distance / kSpeedOfLight, deg2rad(m.aoa_deg), m.gain});
    return out;
}

} // namespace risloc
