#include "emofuse/fusion.hpp"

#include <cmath>

namespace emofuse {

void validate_spec(const FusionNetSpec& spec) {
    for (const auto& b : spec.branches)
        if (b.input_dim <= 0 || b.layer1 <= 0 || b.layer2 <= 0)
            throw InputError("fusion spec: nonpositive branch dim for " +
                             to_string(b.modality));
    if (spec.fusion_width <= 0)
        throw InputError("fusion spec: nonpositive fusion width");
    if (spec.branches[0].modality != Modality::audio ||
        spec.branches[1].modality != Modality::video ||
        spec.branches[2].modality != Modality::text)
        throw InputError("fusion spec: branches must be audio, video, text");
}

NetworkSpec branch_network_spec(const ModalityBranchSpec& branch) {
    return {{branch.input_dim, branch.layer1, Activation::relu},
            {branch.layer1, branch.layer2, Activation::relu}};
}

NetworkSpec trunk_network_spec(const FusionNetSpec& spec) {
    return {{spec.trunk_input_dim(), spec.fusion_width, Activation::relu},
            {spec.fusion_width, 1, Activation::linear}};
}

FusedParams init_fused_params(const FusionNetSpec& spec, Rng& rng) {
    validate_spec(spec);
    FusedParams params;
    for (int m = 0; m < 3; ++m)
        params.branches[m] = init_params(branch_network_spec(spec.branches[m]), rng);
    params.trunk = init_params(trunk_network_spec(spec), rng);
    return params;
}

double forward_fused(const FusionNetSpec& spec, const FusedParams& params,
                     const Eigen::Ref<const Vec>& audio,
                     const Eigen::Ref<const Vec>& video,
                     const Eigen::Ref<const Vec>& text) {
    validate_spec(spec);
    const std::array<const Eigen::Ref<const Vec>*, 3> inputs{&audio, &video,
                                                             &text};
    Vec merged(spec.trunk_input_dim());
    Index at = 0;
    for (int m = 0; m < 3; ++m) {
        const Vec h = forward(branch_network_spec(spec.branches[m]),
                              params.branches[m], *inputs[m]);
        merged.segment(at, h.size()) = h;
        at += h.size();
    }
    return forward(trunk_network_spec(spec), params.trunk, merged)[0];
}

FusedModel::FusedModel(FusionNetSpec spec, FusedParams params)
    : spec_(std::move(spec)), params_(std::move(params)) {
    validate_spec(spec_);
    for (int m = 0; m < 3; ++m)
        check_params(branch_network_spec(spec_.branches[m]), params_.branches[m]);
    check_params(trunk_network_spec(spec_), params_.trunk);
}

FusedModel::FusedModel(FusionNetSpec spec, Rng& rng) : spec_(std::move(spec)) {
    params_ = init_fused_params(spec_, rng);
}

Index FusedModel::input_dim() const { return spec_.total_input_dim(); }

Vec FusedModel::predict(const Eigen::Ref<const Mat>& X) const {
    if (X.rows() != input_dim())
        throw InputError("fused predict: input dim mismatch");
    Mat merged(spec_.trunk_input_dim(), X.cols());
    Index in_at = 0, out_at = 0;
    for (int m = 0; m < 3; ++m) {
        const auto& branch = spec_.branches[m];
        merged.middleRows(out_at, branch.layer2) =
            forward_batch(branch_network_spec(branch), params_.branches[m],
                          X.middleRows(in_at, branch.input_dim));
        in_at += branch.input_dim;
        out_at += branch.layer2;
    }
    return forward_batch(trunk_network_spec(spec_), params_.trunk, merged).row(0);
}

double FusedModel::gradient(const Eigen::Ref<const Mat>& X,
                            const Eigen::Ref<const Vec>& y,
                            Gradients& grads) const {
    if (X.cols() == 0) throw InputError("fused gradient: empty batch");
    if (X.rows() != input_dim() || y.size() != X.cols())
        throw InputError("fused gradient: shape mismatch");

    std::array<ForwardTrace, 3> branch_traces;
    Mat merged(spec_.trunk_input_dim(), X.cols());
    Index in_at = 0, out_at = 0;
    for (int m = 0; m < 3; ++m) {
        const auto& branch = spec_.branches[m];
        branch_traces[m] =
            forward_trace(branch_network_spec(branch), params_.branches[m],
                          X.middleRows(in_at, branch.input_dim));
        merged.middleRows(out_at, branch.layer2) =
            branch_traces[m].activations.back();
        in_at += branch.input_dim;
        out_at += branch.layer2;
    }
    const NetworkSpec trunk = trunk_network_spec(spec_);
    const ForwardTrace trunk_trace = forward_trace(trunk, params_.trunk, merged);

    const double n = static_cast<double>(X.cols());
    const Mat& pred = trunk_trace.activations.back();
    Mat delta = (2.0 / n) * (pred - y.transpose());

    // Flat gradient order matches param_blocks(): branches then trunk.
    grads.clear();
    std::array<Gradients, 3> branch_grads;
    Gradients trunk_grads;
    const Mat merged_grad =
        backprop(trunk, params_.trunk, trunk_trace, std::move(delta), trunk_grads);
    out_at = 0;
    for (int m = 0; m < 3; ++m) {
        const auto& branch = spec_.branches[m];
        backprop(branch_network_spec(branch), params_.branches[m],
                 branch_traces[m], merged_grad.middleRows(out_at, branch.layer2),
                 branch_grads[m]);
        out_at += branch.layer2;
        for (auto& g : branch_grads[m]) grads.push_back(std::move(g));
    }
    for (auto& g : trunk_grads) grads.push_back(std::move(g));

    return (pred.row(0).transpose() - y).squaredNorm() / n;
}

std::vector<LayerParams*> FusedModel::param_blocks() {
    std::vector<LayerParams*> blocks;
    for (auto& branch : params_.branches)
        for (auto& layer : branch) blocks.push_back(&layer);
    for (auto& layer : params_.trunk) blocks.push_back(&layer);
    return blocks;
}

namespace {

constexpr std::array<Index, 3> kStandardDims{1000, 3000, 521};

struct DimensionArch {
    std::array<Index, 3> layer1;
    std::array<Index, 3> layer2;
    Index fusion_width;
};

DimensionArch arch_for(Dimension d) {
    switch (d) {
        case Dimension::arousal: return {{50, 100, 200}, {50, 100, 200}, 100};
        case Dimension::valence: return {{200, 200, 200}, {200, 200, 200}, 200};
        case Dimension::liking: return {{50, 100, 100}, {50, 100, 100}, 50};
    }
    throw InputError("unknown dimension");
}

}  // namespace

FusionNetSpec make_fusion_spec(const std::array<Index, 3>& input_dims,
                               const std::array<Index, 3>& layer1,
                               const std::array<Index, 3>& layer2,
                               Index fusion_width) {
    FusionNetSpec spec;
    const std::array<Modality, 3> mods{Modality::audio, Modality::video,
                                       Modality::text};
    for (int m = 0; m < 3; ++m)
        spec.branches[m] = {mods[m], input_dims[m], layer1[m], layer2[m]};
    spec.fusion_width = fusion_width;
    validate_spec(spec);
    return spec;
}

FusionNetSpec build_proposed(Dimension dimension) {
    const DimensionArch arch = arch_for(dimension);
    return make_fusion_spec(kStandardDims, arch.layer1, arch.layer2,
                            arch.fusion_width);
}

NetworkSpec make_early_spec(Index input_dim, Index hidden_width) {
    if (input_dim <= 0 || hidden_width <= 0)
        throw InputError("early spec: nonpositive dim");
    return {{input_dim, hidden_width, Activation::relu},
            {hidden_width, hidden_width, Activation::relu},
            {hidden_width, 1, Activation::linear}};
}

NetworkSpec build_early(Dimension dimension) {
    const Index total = kStandardDims[0] + kStandardDims[1] + kStandardDims[2];
    return make_early_spec(total, arch_for(dimension).fusion_width);
}

LateFusionModel fit_late_fusion(const Eigen::Ref<const Vec>& audio_pred,
                                const Eigen::Ref<const Vec>& video_pred,
                                const Eigen::Ref<const Vec>& text_pred,
                                const Eigen::Ref<const Vec>& gold) {
    const Index n = gold.size();
    if (audio_pred.size() != n || video_pred.size() != n ||
        text_pred.size() != n)
        throw InputError("late fusion: series length mismatch");
    if (n < 4) throw InputError("late fusion: need at least 4 samples");

    Mat design(n, 4);
    design.col(0) = audio_pred;
    design.col(1) = video_pred;
    design.col(2) = text_pred;
    design.col(3).setOnes();

    Eigen::CompleteOrthogonalDecomposition<Mat> cod(design);
    const Vec beta = cod.solve(gold);
    if (!beta.allFinite())
        throw DegenerateInputError("late fusion: fit produced non-finite values");

    LateFusionModel model;
    model.coefficients = beta.head<3>();
    model.intercept = beta[3];
    model.rank_deficient = cod.rank() < 4;
    return model;
}

Vec predict_late_fusion(const LateFusionModel& model,
                        const Eigen::Ref<const Vec>& audio_pred,
                        const Eigen::Ref<const Vec>& video_pred,
                        const Eigen::Ref<const Vec>& text_pred) {
    return model.coefficients[0] * audio_pred +
           model.coefficients[1] * video_pred +
           model.coefficients[2] * text_pred +
           Vec::Constant(audio_pred.size(), model.intercept);
}

Eigen::Vector3d modality_importance(const LateFusionModel& model) {
    const double total = model.coefficients.sum();
    if (std::abs(total) < 1e-12)
        throw DegenerateInputError(
            "modality importance: coefficient sum is zero");
    return model.coefficients * (100.0 / total);
}

}  // namespace emofuse
