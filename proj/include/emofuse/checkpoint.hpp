#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "emofuse/data.hpp"
#include "emofuse/fusion.hpp"
#include "emofuse/nn.hpp"
#include "emofuse/postproc.hpp"

namespace emofuse {

// Trained model plus everything eval needs to reproduce its protocol:
// the partition it was trained under, the frame period, and the training
// label statistics for the scalers. Exactly one of fused/mono is set.
struct Checkpoint {
    std::string model_kind;  // proposed | early | unimodal:<modality>
    std::string dimension;
    std::string monitor;
    int best_epoch = 0;
    double best_dev_ccc = 0.0;
    double best_dev_mse = 0.0;
    double frame_period_seconds = 0.1;
    LabelStats label_stats;
    Partition partition;
    std::optional<std::pair<FusionNetSpec, FusedParams>> fused;
    std::optional<std::pair<NetworkSpec, NetworkParams>> mono;
};

void save_checkpoint(const std::filesystem::path& file, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace emofuse
