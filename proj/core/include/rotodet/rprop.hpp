#ifndef ROTODET_RPROP_HPP
#define ROTODET_RPROP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotodet/matrix.hpp"

namespace rotodet::rprop {

/// One-hidden-layer perceptron [k, h, 1]: tanh hidden units, linear output.
/// The network regresses normalized angles in [-1, 1]; predict_degrees
/// rescales by 90.
struct MlpModel {
    int input_dim = 0;
    int hidden = 0;
    Matrix w1;               // h x k
    std::vector<double> b1;  // h
    std::vector<double> w2;  // h
    double b2 = 0.0;
};

/// Gradient of the batch MSE with the same shapes as the model.
struct MlpGradient {
    Matrix w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

/// Weights drawn uniformly from [-1/sqrt(fan_in), +1/sqrt(fan_in)] with a
/// seeded deterministic generator: same seed, same bits.
MlpModel mlp_init(int k, int h, std::uint64_t seed);

/// Network output in normalized units for one input row.
double mlp_forward(const MlpModel& model, std::span<const double> x);

/// Network output in degrees.
double predict_degrees(const MlpModel& model, std::span<const double> x);

/// Exact gradient of mean((forward(x_i) - target_i)^2) over the batch.
/// Targets here are in network (normalized) units.
MlpGradient mlp_gradient(const MlpModel& model, const Matrix& inputs,
                         std::span<const double> targets);

struct RpropConfig {
    double eta_plus = 1.2;
    double eta_minus = 0.5;
    double delta0 = 0.1;
    double delta_min = 1e-6;
    double delta_max = 50.0;
    int max_epochs = 2000;
    double target_mse = 0.01; // in normalized units
};

struct TrainResult {
    MlpModel model;
    std::vector<double> history; // MSE per epoch; history[0] is the initial error
    int epochs = 0;
    double final_mse = 0.0;
    double seconds = 0.0;
};

/// Full-batch iRprop-: per-weight step sizes adapt from gradient signs only;
/// on a sign flip the step shrinks and that component skips its update for
/// the epoch. Targets are angles in degrees (normalized internally by 90).
/// Stops at target MSE or max_epochs; throws Divergence if the error goes
/// non-finite.
TrainResult rprop_train(const MlpModel& start, const Matrix& inputs,
                        std::span<const double> target_degrees, const RpropConfig& cfg);

/// "epoch,mse" CSV of a training history, full double precision.
std::string history_csv(std::span<const double> history);

} // namespace rotodet::rprop

#endif
