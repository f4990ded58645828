#pragma once

#include <array>

#include "emofuse/common.hpp"
#include "emofuse/nn.hpp"

namespace emofuse {

// Two hidden layers feeding one modality's features into the merge layer.
struct ModalityBranchSpec {
    Modality modality = Modality::audio;
    Index input_dim = 0;
    Index layer1 = 0;
    Index layer2 = 0;
};

// Branch-merge regression net: per-modality branches, concatenated in fixed
// order (audio, video, text), then a fully connected trunk and a single
// linear output neuron.
struct FusionNetSpec {
    std::array<ModalityBranchSpec, 3> branches;
    Index fusion_width = 0;

    Index trunk_input_dim() const {
        return branches[0].layer2 + branches[1].layer2 + branches[2].layer2;
    }
    Index total_input_dim() const {
        return branches[0].input_dim + branches[1].input_dim +
               branches[2].input_dim;
    }
};

void validate_spec(const FusionNetSpec& spec);

NetworkSpec branch_network_spec(const ModalityBranchSpec& branch);
NetworkSpec trunk_network_spec(const FusionNetSpec& spec);

struct FusedParams {
    std::array<NetworkParams, 3> branches;
    NetworkParams trunk;
};

FusedParams init_fused_params(const FusionNetSpec& spec, Rng& rng);

// Branch forwards, concatenation, trunk forward.
double forward_fused(const FusionNetSpec& spec, const FusedParams& params,
                     const Eigen::Ref<const Vec>& audio,
                     const Eigen::Ref<const Vec>& video,
                     const Eigen::Ref<const Vec>& text);

// Trainable form of the fused net; inputs are the stacked
// [audio; video; text] feature vectors, one per column.
class FusedModel final : public Model {
public:
    FusedModel(FusionNetSpec spec, FusedParams params);
    FusedModel(FusionNetSpec spec, Rng& rng);

    Index input_dim() const override;
    Vec predict(const Eigen::Ref<const Mat>& X) const override;
    double gradient(const Eigen::Ref<const Mat>& X,
                    const Eigen::Ref<const Vec>& y,
                    Gradients& grads) const override;
    std::vector<LayerParams*> param_blocks() override;

    const FusionNetSpec& spec() const { return spec_; }
    const FusedParams& params() const { return params_; }

private:
    FusionNetSpec spec_;
    FusedParams params_;
};

// Architectures for each emotional dimension with the standard feature
// dimensionalities (audio 1000, video 3000, text 521).
FusionNetSpec build_proposed(Dimension dimension);

FusionNetSpec make_fusion_spec(const std::array<Index, 3>& input_dims,
                               const std::array<Index, 3>& layer1,
                               const std::array<Index, 3>& layer2,
                               Index fusion_width);

// Early fusion: one MLP over the 4521-dim concatenation, two hidden layers
// of the dimension's fusion width.
NetworkSpec build_early(Dimension dimension);
NetworkSpec make_early_spec(Index input_dim, Index hidden_width);

struct LateFusionModel {
    Eigen::Vector3d coefficients = Eigen::Vector3d::Zero();
    double intercept = 0.0;
    bool rank_deficient = false;
};

// Least-squares fit (with intercept) of gold on the three unimodal
// prediction series; rank-deficient designs get the minimum-norm solution.
LateFusionModel fit_late_fusion(const Eigen::Ref<const Vec>& audio_pred,
                                const Eigen::Ref<const Vec>& video_pred,
                                const Eigen::Ref<const Vec>& text_pred,
                                const Eigen::Ref<const Vec>& gold);

Vec predict_late_fusion(const LateFusionModel& model,
                        const Eigen::Ref<const Vec>& audio_pred,
                        const Eigen::Ref<const Vec>& video_pred,
                        const Eigen::Ref<const Vec>& text_pred);

// Signed percentage share of each coefficient; sums to 100.
Eigen::Vector3d modality_importance(const LateFusionModel& model);

}  // namespace emofuse
