#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emofuse/common.hpp"
#include "emofuse/rng.hpp"

namespace emofuse {

enum class Activation { relu, linear };

struct DenseLayerSpec {
    Index in_dim = 0;
    Index out_dim = 0;
    Activation activation = Activation::relu;
};

using NetworkSpec = std::vector<DenseLayerSpec>;

struct LayerParams {
    Mat weights;  // out_dim x in_dim
    Vec bias;     // out_dim
};

using NetworkParams = std::vector<LayerParams>;
using Gradients = std::vector<LayerParams>;

void validate_spec(const NetworkSpec& spec);
void check_params(const NetworkSpec& spec, const NetworkParams& params);

// Scaled-uniform fan-in init, zero bias.
NetworkParams init_params(const NetworkSpec& spec, Rng& rng);

Vec forward(const NetworkSpec& spec, const NetworkParams& params,
            const Eigen::Ref<const Vec>& x);

// X columns are samples; returns out_dim x n.
Mat forward_batch(const NetworkSpec& spec, const NetworkParams& params,
                  const Eigen::Ref<const Mat>& X);

struct ForwardTrace {
    std::vector<Mat> activations;  // activations[0] = input, size L+1
    std::vector<Mat> preacts;      // size L
};

ForwardTrace forward_trace(const NetworkSpec& spec, const NetworkParams& params,
                           const Eigen::Ref<const Mat>& X);

// Backpropagate delta = dL/d(output activation) through the trace; appends
// one gradient block per layer to grads (front-to-back order) and returns
// dL/d(input).
Mat backprop(const NetworkSpec& spec, const NetworkParams& params,
             const ForwardTrace& trace, Mat delta, Gradients& grads);

// Gradients of batch MSE (mean over samples of squared error) w.r.t. every
// weight and bias. Y is out_dim x n.
Gradients backward(const NetworkSpec& spec, const NetworkParams& params,
                   const Eigen::Ref<const Mat>& X,
                   const Eigen::Ref<const Mat>& Y);

enum class Optimizer { sgd, adam };
enum class Monitor { ccc, loss };

Optimizer parse_optimizer(std::string_view s);
Monitor parse_monitor(std::string_view s);

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 100;
    int batch_size = 32;
    std::uint64_t rng_seed = 0;
    Optimizer optimizer = Optimizer::adam;
    Monitor monitor = Monitor::ccc;
};

// A differentiable scalar regressor over column-sample batches. Lets the
// training loop drive both the monolithic MLP and the branch-merge net.
class Model {
public:
    virtual ~Model() = default;
    virtual Index input_dim() const = 0;
    virtual Vec predict(const Eigen::Ref<const Mat>& X) const = 0;
    // Returns the batch MSE; fills grads aligned with param_blocks().
    virtual double gradient(const Eigen::Ref<const Mat>& X,
                            const Eigen::Ref<const Vec>& y,
                            Gradients& grads) const = 0;
    virtual std::vector<LayerParams*> param_blocks() = 0;
    std::vector<const LayerParams*> param_blocks() const;
};

class MlpModel final : public Model {
public:
    MlpModel(NetworkSpec spec, NetworkParams params);
    MlpModel(NetworkSpec spec, Rng& rng);

    Index input_dim() const override;
    Vec predict(const Eigen::Ref<const Mat>& X) const override;
    double gradient(const Eigen::Ref<const Mat>& X,
                    const Eigen::Ref<const Vec>& y,
                    Gradients& grads) const override;
    std::vector<LayerParams*> param_blocks() override;

    const NetworkSpec& spec() const { return spec_; }
    const NetworkParams& params() const { return params_; }
    NetworkParams& params() { return params_; }

private:
    NetworkSpec spec_;
    NetworkParams params_;
};

struct EpochStat {
    int epoch = 0;
    double train_mse = 0.0;
    double dev_ccc = 0.0;
    double dev_mse = 0.0;
};

struct TrainResult {
    int best_epoch = 0;
    double best_dev_ccc = 0.0;
    double best_dev_mse = 0.0;
    std::vector<EpochStat> log;
};

// Mini-batch training with per-epoch dev evaluation; on return the model
// holds the parameters from the best monitored epoch. Deterministic for a
// fixed config.
TrainResult train(Model& model, const Eigen::Ref<const Mat>& train_x,
                  const Eigen::Ref<const Vec>& train_y,
                  const Eigen::Ref<const Mat>& dev_x,
                  const Eigen::Ref<const Vec>& dev_y, const TrainConfig& cfg);

}  // namespace emofuse
