#include "emofuse/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "emofuse/align.hpp"
#include "emofuse/rng.hpp"

namespace emofuse {

namespace fs = std::filesystem;
using nlohmann::json;

const Mat& SubjectRecord::features(Modality m) const {
    switch (m) {
        case Modality::audio: return audio;
        case Modality::video: return video;
        case Modality::text: return text;
    }
    throw InputError("unknown modality");
}

const SubjectRecord& Corpus::subject(const std::string& id) const {
    for (const auto& s : subjects)
        if (s.subject_id == id) return s;
    throw InputError("unknown subject id: " + id);
}

void validate_record(const SubjectRecord& record, const CorpusMeta& meta) {
    const Index m = record.labels.rows();
    if (m <= 0)
        throw LoadError("subject " + record.subject_id + ": no frames");
    if (record.labels.cols() != 3)
        throw LoadError("subject " + record.subject_id +
                        ": labels must have 3 columns");
    const std::array<const Mat*, 3> feats{&record.audio, &record.video,
                                          &record.text};
    const std::array<Modality, 3> mods{Modality::audio, Modality::video,
                                       Modality::text};
    for (int i = 0; i < 3; ++i) {
        if (feats[i]->rows() != m)
            throw LoadError("subject " + record.subject_id + ": " +
                            to_string(mods[i]) + " has " +
                            std::to_string(feats[i]->rows()) + " frames, labels " +
                            std::to_string(m));
        if (feats[i]->cols() != meta.feature_dims[i])
            throw LoadError("subject " + record.subject_id + ": " +
                            to_string(mods[i]) + " has " +
                            std::to_string(feats[i]->cols()) +
                            " columns, expected " +
                            std::to_string(meta.feature_dims[i]));
        if (!feats[i]->allFinite())
            throw LoadError("subject " + record.subject_id + ": non-finite " +
                            to_string(mods[i]) + " feature");
    }
    if (!record.labels.allFinite())
        throw LoadError("subject " + record.subject_id + ": non-finite label");
}

Partition split_partition(const std::vector<std::string>& subject_ids,
                          int n_train, int n_select, std::uint64_t rng_seed) {
    const int n = static_cast<int>(subject_ids.size());
    if (n_train < 0 || n_train > n)
        throw InputError("split: n_train out of range");
    const int n_dev = n - n_train;
    if (n_select < 0 || n_select >= n_dev || n_dev < 2)
        throw InputError("split: n_select must satisfy 0 <= n_select < dev size");
    std::vector<std::string> ids = subject_ids;
    Rng rng(rng_seed);
    rng.shuffle(ids);
    Partition p;
    p.train.assign(ids.begin(), ids.begin() + n_train);
    p.dev_select.assign(ids.begin() + n_train, ids.begin() + n_train + n_select);
    p.dev_test.assign(ids.begin() + n_train + n_select, ids.end());
    return p;
}

void validate_config(const SynthConfig& cfg) {
    if (cfg.n_subjects <= 0 || cfg.frames_per_subject <= 0 ||
        cfg.latent_dim <= 0)
        throw InputError("synth config: counts must be positive");
    if (cfg.noise_sigma < 0.0)
        throw InputError("synth config: noise_sigma must be nonnegative");
    if (cfg.frame_period_seconds <= 0.0)
        throw InputError("synth config: frame period must be positive");
    if (cfg.latent_smoothness < 0.0 || cfg.latent_smoothness >= 1.0)
        throw InputError("synth config: smoothness must be in [0, 1)");
    for (double d : cfg.delay_seconds)
        if (d < 0.0) throw InputError("synth config: negative delay");
    for (Index dim : cfg.feature_dims)
        if (dim <= 0) throw InputError("synth config: nonpositive feature dim");
}

Corpus generate_synthetic(const SynthConfig& cfg) {
    validate_config(cfg);
    Rng rng(cfg.rng_seed);

    // Fixed embeddings and readouts shared across subjects.
    std::array<Mat, 3> embedding;
    for (int m = 0; m < 3; ++m) {
        embedding[m].resize(cfg.feature_dims[m], cfg.latent_dim);
        const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.latent_dim));
        for (Index i = 0; i < embedding[m].rows(); ++i)
            for (Index j = 0; j < embedding[m].cols(); ++j)
                embedding[m](i, j) = scale * rng.gaussian();
    }
    std::array<Vec, 3> readout;
    for (int d = 0; d < 3; ++d) {
        readout[d].resize(cfg.latent_dim);
        for (Index j = 0; j < cfg.latent_dim; ++j) readout[d][j] = rng.gaussian();
        readout[d].normalize();
    }

    Corpus corpus;
    corpus.meta.frame_period_seconds = cfg.frame_period_seconds;
    corpus.meta.feature_dims = cfg.feature_dims;

    const Index frames = cfg.frames_per_subject;
    const double rho = cfg.latent_smoothness;
    const double innovation = std::sqrt(1.0 - rho * rho);

    for (int s = 0; s < cfg.n_subjects; ++s) {
        SubjectRecord record;
        {
            std::ostringstream id;
            id << "subj" << (s < 10 ? "0" : "") << s;
            record.subject_id = id.str();
        }

        Mat latent(frames, cfg.latent_dim);
        for (Index j = 0; j < cfg.latent_dim; ++j)
            latent(0, j) = rng.gaussian();
        for (Index t = 1; t < frames; ++t)
            for (Index j = 0; j < cfg.latent_dim; ++j)
                latent(t, j) = rho * latent(t - 1, j) + innovation * rng.gaussian();

        record.labels.resize(frames, 3);
        for (int d = 0; d < 3; ++d) {
            const Vec trace = latent * readout[d];
            const DelaySpec spec{cfg.delay_seconds[d], cfg.frame_period_seconds};
            const Index k = spec.frames();
            if (k >= frames)
                throw InputError("synth config: delay exceeds subject length");
            record.labels.col(d) = shift_frames(trace, k);
        }

        std::array<Mat*, 3> feats{&record.audio, &record.video, &record.text};
        for (int m = 0; m < 3; ++m) {
            Mat& x = *feats[m];
            x = cfg.modality_snr[m] * (latent * embedding[m].transpose());
            for (Index t = 0; t < frames; ++t)
                for (Index j = 0; j < cfg.feature_dims[m]; ++j)
                    x(t, j) += cfg.noise_sigma * rng.gaussian();
        }

        validate_record(record, corpus.meta);
        corpus.meta.subject_ids.push_back(record.subject_id);
        corpus.subjects.push_back(std::move(record));
    }
    return corpus;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view cell, const fs::path& file, Index line,
                    Index column) {
    double v = 0.0;
    // from_chars rejects leading whitespace and trailing garbage.
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw LoadError(file.string() + ":" + std::to_string(line) +
                        ": non-numeric cell in column " + std::to_string(column) +
                        ": '" + std::string(cell) + "'");
    return v;
}

std::vector<std::string_view> split_row(std::string_view row) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = row.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(row.substr(start));
            break;
        }
        cells.push_back(row.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

void write_matrix_csv(const Mat& m, const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw LoadError("cannot open for writing: " + file.string());
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
    if (!out) throw LoadError("write failed: " + file.string());
}

Mat read_matrix_csv(const fs::path& file, Index expected_cols,
                    bool skip_header) {
    std::ifstream in(file);
    if (!in) throw LoadError("missing file: " + file.string());
    std::vector<std::vector<double>> rows;
    std::string row;
    Index line = 0;
    while (std::getline(in, row)) {
        ++line;
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (line == 1 && skip_header) continue;
        if (row.empty()) continue;
        const auto cells = split_row(row);
        if (expected_cols > 0 &&
            static_cast<Index>(cells.size()) != expected_cols)
            throw LoadError(file.string() + ":" + std::to_string(line) + ": got " +
                            std::to_string(cells.size()) + " columns, expected " +
                            std::to_string(expected_cols));
        std::vector<double> vals;
        vals.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            vals.push_back(parse_double(cells[c], file, line,
                                        static_cast<Index>(c + 1)));
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw LoadError("empty file: " + file.string());
    Mat m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

}  // namespace

void write_corpus(const Corpus& corpus, const fs::path& root) {
    fs::create_directories(root);
    json meta;
    meta["frame_period_seconds"] = corpus.meta.frame_period_seconds;
    meta["audio_dim"] = corpus.meta.feature_dims[0];
    meta["video_dim"] = corpus.meta.feature_dims[1];
    meta["text_dim"] = corpus.meta.feature_dims[2];
    meta["subjects"] = corpus.meta.subject_ids;
    {
        std::ofstream out(root / "meta.json");
        if (!out) throw LoadError("cannot write " + (root / "meta.json").string());
        out << meta.dump(2) << '\n';
    }
    for (const auto& record : corpus.subjects) {
        validate_record(record, corpus.meta);
        const fs::path dir = root / record.subject_id;
        fs::create_directories(dir);
        write_matrix_csv(record.audio, dir / "audio.csv");
        write_matrix_csv(record.video, dir / "video.csv");
        write_matrix_csv(record.text, dir / "text.csv");
        std::ofstream out(dir / "labels.csv");
        if (!out) throw LoadError("cannot write " + (dir / "labels.csv").string());
        out << "frame,arousal,valence,liking\n";
        for (Index t = 0; t < record.labels.rows(); ++t)
            out << t << ',' << format_double(record.labels(t, 0)) << ','
                << format_double(record.labels(t, 1)) << ','
                << format_double(record.labels(t, 2)) << '\n';
    }
}

Corpus load_corpus(const fs::path& root) {
    const fs::path meta_file = root / "meta.json";
    std::ifstream in(meta_file);
    if (!in) throw LoadError("missing file: " + meta_file.string());
    json meta;
    try {
        in >> meta;
    } catch (const json::exception& e) {
        throw LoadError(meta_file.string() + ": " + e.what());
    }

    Corpus corpus;
    try {
        corpus.meta.frame_period_seconds = meta.at("frame_period_seconds");
        corpus.meta.feature_dims = {meta.at("audio_dim").get<Index>(),
                                    meta.at("video_dim").get<Index>(),
                                    meta.at("text_dim").get<Index>()};
        corpus.meta.subject_ids =
            meta.at("subjects").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw LoadError(meta_file.string() + ": " + e.what());
    }
    if (corpus.meta.frame_period_seconds <= 0.0)
        throw LoadError(meta_file.string() + ": frame period must be positive");

    for (const auto& id : corpus.meta.subject_ids) {
        const fs::path dir = root / id;
        SubjectRecord record;
        record.subject_id = id;
        record.audio =
            read_matrix_csv(dir / "audio.csv", corpus.meta.feature_dims[0], false);
        record.video =
            read_matrix_csv(dir / "video.csv", corpus.meta.feature_dims[1], false);
        record.text =
            read_matrix_csv(dir / "text.csv", corpus.meta.feature_dims[2], false);
        const Mat labels = read_matrix_csv(dir / "labels.csv", 4, true);
        record.labels = labels.rightCols(3);
        validate_record(record, corpus.meta);
        corpus.subjects.push_back(std::move(record));
    }
    return corpus;
}

}  // namespace emofuse
