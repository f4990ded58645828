#include "emofuse/nn.hpp"

#include <cmath>

#include "emofuse/metrics.hpp"

namespace emofuse {

void validate_spec(const NetworkSpec& spec) {
    if (spec.empty()) throw InputError("network spec: no layers");
    for (std::size_t l = 0; l < spec.size(); ++l) {
        if (spec[l].in_dim <= 0 || spec[l].out_dim <= 0)
            throw InputError("network spec: nonpositive dim at layer " +
                             std::to_string(l));
        if (l > 0 && spec[l].in_dim != spec[l - 1].out_dim)
            throw InputError("network spec: dim mismatch between layers " +
                             std::to_string(l - 1) + " and " + std::to_string(l));
    }
}

void check_params(const NetworkSpec& spec, const NetworkParams& params) {
    validate_spec(spec);
    if (params.size() != spec.size())
        throw InputError("network params: layer count mismatch");
    for (std::size_t l = 0; l < spec.size(); ++l) {
        if (params[l].weights.rows() != spec[l].out_dim ||
            params[l].weights.cols() != spec[l].in_dim ||
            params[l].bias.size() != spec[l].out_dim)
            throw InputError("network params: shape mismatch at layer " +
                             std::to_string(l));
        if (!params[l].weights.allFinite() || !params[l].bias.allFinite())
            throw InputError("network params: non-finite value at layer " +
                             std::to_string(l));
    }
}

NetworkParams init_params(const NetworkSpec& spec, Rng& rng) {
    validate_spec(spec);
    NetworkParams params;
    params.reserve(spec.size());
    for (const auto& layer : spec) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.in_dim));
        Mat w(layer.out_dim, layer.in_dim);
        for (Index i = 0; i < w.rows(); ++i)
            for (Index j = 0; j < w.cols(); ++j)
                w(i, j) = rng.uniform(-limit, limit);
        params.push_back({std::move(w), Vec::Zero(layer.out_dim)});
    }
    return params;
}

namespace {

inline void apply_activation(Activation act, Mat& z) {
    if (act == Activation::relu) z = z.cwiseMax(0.0);
}

}  // namespace

Mat forward_batch(const NetworkSpec& spec, const NetworkParams& params,
                  const Eigen::Ref<const Mat>& X) {
    check_params(spec, params);
    if (X.rows() != spec.front().in_dim)
        throw InputError("forward: input dim " + std::to_string(X.rows()) +
                         " != expected " + std::to_string(spec.front().in_dim));
    Mat a = X;
    for (std::size_t l = 0; l < spec.size(); ++l) {
        Mat z = (params[l].weights * a).colwise() + params[l].bias;
        apply_activation(spec[l].activation, z);
        a = std::move(z);
    }
    return a;
}

Vec forward(const NetworkSpec& spec, const NetworkParams& params,
            const Eigen::Ref<const Vec>& x) {
    return forward_batch(spec, params, x);
}

ForwardTrace forward_trace(const NetworkSpec& spec, const NetworkParams& params,
                           const Eigen::Ref<const Mat>& X) {
    check_params(spec, params);
    if (X.rows() != spec.front().in_dim)
        throw InputError("forward_trace: input dim mismatch");
    ForwardTrace trace;
    trace.activations.reserve(spec.size() + 1);
    trace.preacts.reserve(spec.size());
    trace.activations.push_back(X);
    for (std::size_t l = 0; l < spec.size(); ++l) {
        Mat z = (params[l].weights * trace.activations.back()).colwise() +
                params[l].bias;
        trace.preacts.push_back(z);
        apply_activation(spec[l].activation, z);
        trace.activations.push_back(std::move(z));
    }
    return trace;
}

Mat backprop(const NetworkSpec& spec, const NetworkParams& params,
             const ForwardTrace& trace, Mat delta, Gradients& grads) {
    const std::size_t first = grads.size();
    grads.resize(first + spec.size());
    for (std::size_t l = spec.size(); l-- > 0;) {
        if (spec[l].activation == Activation::relu)
            delta = delta.cwiseProduct(
                (trace.preacts[l].array() > 0.0).cast<double>().matrix());
        grads[first + l].weights = delta * trace.activations[l].transpose();
        grads[first + l].bias = delta.rowwise().sum();
        if (l > 0) delta = params[l].weights.transpose() * delta;
    }
    return params[0].weights.transpose() * delta;
}

Gradients backward(const NetworkSpec& spec, const NetworkParams& params,
                   const Eigen::Ref<const Mat>& X,
                   const Eigen::Ref<const Mat>& Y) {
    if (X.cols() == 0) throw InputError("backward: empty batch");
    if (Y.cols() != X.cols() || Y.rows() != spec.back().out_dim)
        throw InputError("backward: target shape mismatch");
    const ForwardTrace trace = forward_trace(spec, params, X);
    const double n = static_cast<double>(X.cols());
    Mat delta = (2.0 / n) * (trace.activations.back() - Y);
    Gradients grads;
    backprop(spec, params, trace, std::move(delta), grads);
    return grads;
}

Optimizer parse_optimizer(std::string_view s) {
    if (s == "sgd") return Optimizer::sgd;
    if (s == "adam") return Optimizer::adam;
    throw InputError("unknown optimizer: " + std::string(s));
}

Monitor parse_monitor(std::string_view s) {
    if (s == "ccc") return Monitor::ccc;
    if (s == "loss") return Monitor::loss;
    throw InputError("unknown monitor: " + std::string(s));
}

std::vector<const LayerParams*> Model::param_blocks() const {
    auto blocks = const_cast<Model*>(this)->param_blocks();
    return {blocks.begin(), blocks.end()};
}

MlpModel::MlpModel(NetworkSpec spec, NetworkParams params)
    : spec_(std::move(spec)), params_(std::move(params)) {
    check_params(spec_, params_);
}

MlpModel::MlpModel(NetworkSpec spec, Rng& rng) : spec_(std::move(spec)) {
    params_ = init_params(spec_, rng);
}

Index MlpModel::input_dim() const { return spec_.front().in_dim; }

Vec MlpModel::predict(const Eigen::Ref<const Mat>& X) const {
    if (spec_.back().out_dim != 1)
        throw InputError("predict: model output dim must be 1");
    return forward_batch(spec_, params_, X).row(0);
}

double MlpModel::gradient(const Eigen::Ref<const Mat>& X,
                          const Eigen::Ref<const Vec>& y,
                          Gradients& grads) const {
    grads = backward(spec_, params_, X, y.transpose());
    const Vec pred = forward_batch(spec_, params_, X).row(0);
    return (pred - y).squaredNorm() / static_cast<double>(X.cols());
}

std::vector<LayerParams*> MlpModel::param_blocks() {
    std::vector<LayerParams*> blocks;
    for (auto& p : params_) blocks.push_back(&p);
    return blocks;
}

namespace {

struct AdamState {
    std::vector<LayerParams> m;
    std::vector<LayerParams> v;
    long step = 0;
};

AdamState make_adam_state(const std::vector<LayerParams*>& blocks) {
    AdamState st;
    for (const auto* b : blocks) {
        st.m.push_back({Mat::Zero(b->weights.rows(), b->weights.cols()),
                        Vec::Zero(b->bias.size())});
        st.v.push_back({Mat::Zero(b->weights.rows(), b->weights.cols()),
                        Vec::Zero(b->bias.size())});
    }
    return st;
}

void sgd_step(std::vector<LayerParams*>& blocks, const Gradients& grads,
              double lr) {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        blocks[i]->weights -= lr * grads[i].weights;
        blocks[i]->bias -= lr * grads[i].bias;
    }
}

void adam_step(AdamState& st, std::vector<LayerParams*>& blocks,
               const Gradients& grads, double lr) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    ++st.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.step));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        st.m[i].weights = beta1 * st.m[i].weights + (1.0 - beta1) * grads[i].weights;
        st.m[i].bias = beta1 * st.m[i].bias + (1.0 - beta1) * grads[i].bias;
        st.v[i].weights = beta2 * st.v[i].weights.array().matrix() +
                          (1.0 - beta2) * grads[i].weights.array().square().matrix();
        st.v[i].bias = beta2 * st.v[i].bias.array().matrix() +
                       (1.0 - beta2) * grads[i].bias.array().square().matrix();
        blocks[i]->weights.array() -=
            lr * (st.m[i].weights.array() / bc1) /
            ((st.v[i].weights.array() / bc2).sqrt() + eps);
        blocks[i]->bias.array() -= lr * (st.m[i].bias.array() / bc1) /
                                   ((st.v[i].bias.array() / bc2).sqrt() + eps);
    }
}

std::vector<LayerParams> snapshot(const std::vector<LayerParams*>& blocks) {
    std::vector<LayerParams> copy;
    copy.reserve(blocks.size());
    for (const auto* b : blocks) copy.push_back(*b);
    return copy;
}

void restore(std::vector<LayerParams*>& blocks,
             const std::vector<LayerParams>& saved) {
    for (std::size_t i = 0; i < blocks.size(); ++i) *blocks[i] = saved[i];
}

}  // namespace

TrainResult train(Model& model, const Eigen::Ref<const Mat>& train_x,
                  const Eigen::Ref<const Vec>& train_y,
                  const Eigen::Ref<const Mat>& dev_x,
                  const Eigen::Ref<const Vec>& dev_y, const TrainConfig& cfg) {
    if (train_x.cols() == 0 || dev_x.cols() == 0)
        throw InputError("train: empty train or dev set");
    if (train_x.cols() != train_y.size() || dev_x.cols() != dev_y.size())
        throw InputError("train: sample/label count mismatch");
    if (train_x.rows() != model.input_dim() || dev_x.rows() != model.input_dim())
        throw InputError("train: feature dim does not match model input");
    if (cfg.learning_rate < 0.0 || cfg.epochs <= 0 || cfg.batch_size <= 0)
        throw InputError("train: invalid config");

    auto blocks = model.param_blocks();
    Rng rng(cfg.rng_seed);
    AdamState adam = make_adam_state(blocks);

    const Index n = train_x.cols();
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

    TrainResult result;
    std::vector<LayerParams> best = snapshot(blocks);
    double best_score = 0.0;
    bool have_best = false;
    Gradients grads;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (Index start = 0; start < n; start += cfg.batch_size) {
            const Index bsz = std::min<Index>(cfg.batch_size, n - start);
            Mat xb(train_x.rows(), bsz);
            Vec yb(bsz);
            for (Index j = 0; j < bsz; ++j) {
                const Index src = order[static_cast<std::size_t>(start + j)];
                xb.col(j) = train_x.col(src);
                yb[j] = train_y[src];
            }
            const double batch_loss = model.gradient(xb, yb, grads);
            if (!std::isfinite(batch_loss))
                throw TrainError("training diverged (non-finite loss) at epoch " +
                                 std::to_string(epoch));
            if (cfg.optimizer == Optimizer::adam)
                adam_step(adam, blocks, grads, cfg.learning_rate);
            else
                sgd_step(blocks, grads, cfg.learning_rate);
        }

        Vec train_pred, dev_pred;
        try {
            train_pred = model.predict(train_x);
            dev_pred = model.predict(dev_x);
        } catch (const InputError&) {
            throw TrainError("training diverged (non-finite parameters) at epoch " +
                             std::to_string(epoch));
        }
        if (!train_pred.allFinite() || !dev_pred.allFinite())
            throw TrainError("training diverged (non-finite loss) at epoch " +
                             std::to_string(epoch));
        EpochStat stat;
        stat.epoch = epoch;
        stat.train_mse = mse(train_pred, train_y);
        stat.dev_mse = mse(dev_pred, dev_y);
        stat.dev_ccc = ccc(dev_pred, dev_y);
        if (!std::isfinite(stat.train_mse) || !std::isfinite(stat.dev_mse))
            throw TrainError("training diverged (non-finite loss) at epoch " +
                             std::to_string(epoch));
        result.log.push_back(stat);

        const double score =
            cfg.monitor == Monitor::ccc ? stat.dev_ccc : -stat.dev_mse;
        if (!have_best || score > best_score) {
            have_best = true;
            best_score = score;
            best = snapshot(blocks);
            result.best_epoch = epoch;
            result.best_dev_ccc = stat.dev_ccc;
            result.best_dev_mse = stat.dev_mse;
        }
    }

    restore(blocks, best);
    return result;
}

}  // namespace emofuse
