#include "rotodet/rprop.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "rotodet/rng.hpp"

namespace rotodet::rprop {

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Flat view over all trainable parameters so the Rprop state can be a plain
// array. Order: w1 row-major, b1, w2, b2.
struct ParamView {
    static int count(const MlpModel& m) {
        return m.hidden * m.input_dim + m.hidden + m.hidden + 1;
    }
    static double get(const MlpModel& m, int idx) {
        const int n1 = m.hidden * m.input_dim;
        if (idx < n1) return m.w1(idx / m.input_dim, idx % m.input_dim);
        idx -= n1;
        if (idx < m.hidden) return m.b1[idx];
        idx -= m.hidden;
        if (idx < m.hidden) return m.w2[idx];
        return m.b2;
    }
    static void add(MlpModel& m, int idx, double delta) {
        const int n1 = m.hidden * m.input_dim;
        if (idx < n1) {
            m.w1(idx / m.input_dim, idx % m.input_dim) += delta;
            return;
        }
        idx -= n1;
        if (idx < m.hidden) {
            m.b1[idx] += delta;
            return;
        }
        idx -= m.hidden;
        if (idx < m.hidden) {
            m.w2[idx] += delta;
            return;
        }
        m.b2 += delta;
    }
    static double get(const MlpGradient& g, const MlpModel& m, int idx) {
        const int n1 = m.hidden * m.input_dim;
        if (idx < n1) return g.w1(idx / m.input_dim, idx % m.input_dim);
        idx -= n1;
        if (idx < m.hidden) return g.b1[idx];
        idx -= m.hidden;
        if (idx < m.hidden) return g.w2[idx];
        return g.b2;
    }
};

// Gradient and MSE in one pass over the batch.
double gradient_and_mse(const MlpModel& model, const Matrix& inputs,
                        std::span<const double> targets, MlpGradient& grad) {
    const int m = inputs.rows();
    const int h = model.hidden;
    const int k = model.input_dim;

    grad.w1 = Matrix(h, k, 0.0);
    grad.b1.assign(static_cast<std::size_t>(h), 0.0);
    grad.w2.assign(static_cast<std::size_t>(h), 0.0);
    grad.b2 = 0.0;

    std::vector<double> act(static_cast<std::size_t>(h));
    double mse = 0.0;
    for (int s = 0; s < m; ++s) {
        const auto x = inputs.row(s);
        double y = model.b2;
        for (int j = 0; j < h; ++j) {
            double z = model.b1[j];
            const auto wrow = model.w1.row(j);
            for (int i = 0; i < k; ++i) z += wrow[i] * x[i];
            act[j] = std::tanh(z);
            y += model.w2[j] * act[j];
        }
        const double err = y - targets[s];
        mse += err * err;

        const double dy = 2.0 * err / static_cast<double>(m);
        grad.b2 += dy;
        for (int j = 0; j < h; ++j) {
            grad.w2[j] += dy * act[j];
            const double dz = dy * model.w2[j] * (1.0 - act[j] * act[j]);
            grad.b1[j] += dz;
            auto grow = grad.w1.row(j);
            for (int i = 0; i < k; ++i) grow[i] += dz * x[i];
        }
    }
    return mse / static_cast<double>(m);
}

} // namespace

MlpModel mlp_init(int k, int h, std::uint64_t seed) {
    if (k < 1 || h < 1) throw DimensionMismatch("mlp_init: layer sizes must be >= 1");
    Rng rng(seed);
    MlpModel m;
    m.input_dim = k;
    m.hidden = h;
    m.w1 = Matrix(h, k);
    const double r1 = 1.0 / std::sqrt(static_cast<double>(k));
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < k; ++i) m.w1(j, i) = rng.uniform(-r1, r1);
    m.b1.resize(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) m.b1[j] = rng.uniform(-r1, r1);
    const double r2 = 1.0 / std::sqrt(static_cast<double>(h));
    m.w2.resize(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) m.w2[j] = rng.uniform(-r2, r2);
    m.b2 = rng.uniform(-r2, r2);
    return m;
}

double mlp_forward(const MlpModel& model, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(model.input_dim))
        throw DimensionMismatch("mlp_forward: input length != input_dim");
    double y = model.b2;
    for (int j = 0; j < model.hidden; ++j) {
        double z = model.b1[j];
        const auto wrow = model.w1.row(j);
        for (int i = 0; i < model.input_dim; ++i) z += wrow[i] * x[i];
        y += model.w2[j] * std::tanh(z);
    }
    return y;
}

double predict_degrees(const MlpModel& model, std::span<const double> x) {
    return 90.0 * mlp_forward(model, x);
}

MlpGradient mlp_gradient(const MlpModel& model, const Matrix& inputs,
                         std::span<const double> targets) {
    if (inputs.cols() != model.input_dim)
        throw DimensionMismatch("mlp_gradient: input width != input_dim");
    if (targets.size() != static_cast<std::size_t>(inputs.rows()))
        throw DimensionMismatch("mlp_gradient: target count != sample count");
    MlpGradient g;
    gradient_and_mse(model, inputs, targets, g);
    return g;
}

TrainResult rprop_train(const MlpModel& start, const Matrix& inputs,
                        std::span<const double> target_degrees, const RpropConfig& cfg) {
    if (inputs.cols() != start.input_dim)
        throw DimensionMismatch("rprop_train: input width != input_dim");
    if (target_degrees.size() != static_cast<std::size_t>(inputs.rows()))
        throw DimensionMismatch("rprop_train: target count != sample count");
    if (!(cfg.eta_minus > 0.0 && cfg.eta_minus < 1.0 && cfg.eta_plus > 1.0))
        throw Error("rprop_train: need 0 < eta- < 1 < eta+");
    if (!(cfg.delta_min > 0.0 && cfg.delta_min <= cfg.delta0 && cfg.delta0 <= cfg.delta_max))
        throw Error("rprop_train: need 0 < delta_min <= delta0 <= delta_max");

    std::vector<double> targets(target_degrees.begin(), target_degrees.end());
    for (double& t : targets) t /= 90.0;

    const auto t0 = std::chrono::steady_clock::now();
    TrainResult result;
    result.model = start;

    const int n_params = ParamView::count(start);
    std::vector<double> step(static_cast<std::size_t>(n_params), cfg.delta0);
    std::vector<double> prev_grad(static_cast<std::size_t>(n_params), 0.0);

    MlpGradient grad;
    double mse = gradient_and_mse(result.model, inputs, targets, grad);
    if (!std::isfinite(mse))
        throw Divergence("rprop_train: initial error is non-finite");
    result.history.push_back(mse);

    int epoch = 0;
    while (epoch < cfg.max_epochs && mse > cfg.target_mse) {
        for (int p = 0; p < n_params; ++p) {
            double g = ParamView::get(grad, result.model, p);
            const double s = g * prev_grad[p];
            if (s > 0.0) {
                step[p] = std::min(step[p] * cfg.eta_plus, cfg.delta_max);
                ParamView::add(result.model, p, -sign_of(g) * step[p]);
            } else if (s < 0.0) {
                // iRprop-: shrink the step, skip this component's update
                step[p] = std::max(step[p] * cfg.eta_minus, cfg.delta_min);
                g = 0.0;
            } else {
                ParamView::add(result.model, p, -sign_of(g) * step[p]);
            }
            prev_grad[p] = g;
        }
        mse = gradient_and_mse(result.model, inputs, targets, grad);
        if (!std::isfinite(mse))
            throw Divergence("rprop_train: error became non-finite at epoch " +
                             std::to_string(epoch + 1));
        result.history.push_back(mse);
        ++epoch;
    }

    result.epochs = epoch;
    result.final_mse = mse;
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string history_csv(std::span<const double> history) {
    std::string out = "epoch,mse\n";
    char buf[64];
    for (std::size_t i = 0; i < history.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, history[i]);
        out += buf;
    }
    return out;
}

} // namespace rotodet::rprop
