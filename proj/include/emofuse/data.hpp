#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "emofuse/common.hpp"

namespace emofuse {

// One subject's aligned feature and label series. Rows are frames.
struct SubjectRecord {
    std::string subject_id;
    Mat audio;   // m x audio_dim
    Mat video;   // m x video_dim
    Mat text;    // m x text_dim
    Mat labels;  // m x 3 (arousal, valence, liking)

    Index frames() const { return labels.rows(); }
    const Mat& features(Modality m) const;
    Vec label_column(Dimension d) const { return labels.col(static_cast<int>(d)); }
};

struct CorpusMeta {
    double frame_period_seconds = 0.1;
    std::array<Index, 3> feature_dims{1000, 3000, 521};  // audio, video, text
    std::vector<std::string> subject_ids;
};

struct Corpus {
    CorpusMeta meta;
    std::vector<SubjectRecord> subjects;

    const SubjectRecord& subject(const std::string& id) const;
};

void validate_record(const SubjectRecord& record, const CorpusMeta& meta);

struct Partition {
    std::vector<std::string> train;
    std::vector<std::string> dev_select;
    std::vector<std::string> dev_test;
};

// Seeded split: n_train subjects into train, n_select of the remaining
// (development) subjects into dev_select, the rest into dev_test.
Partition split_partition(const std::vector<std::string>& subject_ids,
                          int n_train, int n_select, std::uint64_t rng_seed);

struct SynthConfig {
    int n_subjects = 20;
    int frames_per_subject = 500;
    int latent_dim = 8;
    double noise_sigma = 1.0;
    std::array<double, 3> modality_snr{1.0, 1.0, 1.0};
    std::uint64_t rng_seed = 0;
    std::array<double, 3> delay_seconds{0.0, 0.0, 0.0};  // per dimension
    double frame_period_seconds = 0.1;
    std::array<Index, 3> feature_dims{1000, 3000, 521};
    double latent_smoothness = 0.98;  // AR(1) coefficient
};

void validate_config(const SynthConfig& cfg);

// Smooth latent traces per dimension, modalities as fixed random linear
// embeddings of the latent plus noise, labels as the (optionally delayed)
// latent trace. Bit-reproducible for a fixed config.
Corpus generate_synthetic(const SynthConfig& cfg);

// On-disk layout: <root>/meta.json plus one directory per subject holding
// audio.csv, video.csv, text.csv (no header) and labels.csv (with header).
void write_corpus(const Corpus& corpus, const std::filesystem::path& root);
Corpus load_corpus(const std::filesystem::path& root);

}  // namespace emofuse
