// Command-line front end: synthetic corpus generation, per-dimension
// training, evaluation with output scaling and delay compensation, late
// fusion, and plot-ready report files.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emofuse/align.hpp"
#include "emofuse/checkpoint.hpp"
#include "emofuse/data.hpp"
#include "emofuse/fusion.hpp"
#include "emofuse/metrics.hpp"
#include "emofuse/nn.hpp"
#include "emofuse/postproc.hpp"

namespace fs = std::filesystem;
using namespace emofuse;

namespace {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ':', '-');
    return s;
}

// ---------------------------------------------------------------------------
// Dataset assembly
// ---------------------------------------------------------------------------

bool is_unimodal(const std::string& model_kind) {
    return model_kind.rfind("unimodal:", 0) == 0;
}

Modality unimodal_modality(const std::string& model_kind) {
    return parse_modality(model_kind.substr(std::string("unimodal:").size()));
}

// Features for one subject as a column-sample matrix; multimodal models get
// the audio/video/text stack in fixed order.
Mat subject_inputs(const SubjectRecord& record, const std::string& model_kind) {
    if (is_unimodal(model_kind))
        return record.features(unimodal_modality(model_kind)).transpose();
    Mat x(record.audio.cols() + record.video.cols() + record.text.cols(),
          record.frames());
    x.topRows(record.audio.cols()) = record.audio.transpose();
    x.middleRows(record.audio.cols(), record.video.cols()) =
        record.video.transpose();
    x.bottomRows(record.text.cols()) = record.text.transpose();
    return x;
}

struct Pooled {
    Mat x;
    Vec y;
};

Pooled pool_subjects(const Corpus& corpus, const std::vector<std::string>& ids,
                     const std::string& model_kind, Dimension dim) {
    if (ids.empty()) throw InputError("empty subject set");
    Index total = 0;
    for (const auto& id : ids) total += corpus.subject(id).frames();
    Pooled out;
    out.y.resize(total);
    Index at = 0;
    for (const auto& id : ids) {
        const auto& record = corpus.subject(id);
        const Mat x = subject_inputs(record, model_kind);
        if (at == 0) out.x.resize(x.rows(), total);
        out.x.middleCols(at, x.cols()) = x;
        out.y.segment(at, x.cols()) = record.label_column(dim);
        at += x.cols();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model construction
// ---------------------------------------------------------------------------

struct BranchWidths {
    std::array<Index, 3> layer1;
    std::array<Index, 3> layer2;
    Index fusion_width;
};

BranchWidths widths_for(Dimension dim, Index hidden_override) {
    if (hidden_override > 0)
        return {{hidden_override, hidden_override, hidden_override},
                {hidden_override, hidden_override, hidden_override},
                hidden_override};
    const FusionNetSpec table = build_proposed(dim);
    return {{table.branches[0].layer1, table.branches[1].layer1,
             table.branches[2].layer1},
            {table.branches[0].layer2, table.branches[1].layer2,
             table.branches[2].layer2},
            table.fusion_width};
}

NetworkSpec unimodal_spec(Modality mod, Index input_dim, Dimension dim,
                          Index hidden_override) {
    const BranchWidths w = widths_for(dim, hidden_override);
    const int m = static_cast<int>(mod);
    return {{input_dim, w.layer1[m], Activation::relu},
            {w.layer1[m], w.layer2[m], Activation::relu},
            {w.layer2[m], w.fusion_width, Activation::relu},
            {w.fusion_width, 1, Activation::linear}};
}

std::unique_ptr<Model> build_model(const std::string& model_kind, Dimension dim,
                                   const CorpusMeta& meta, Index hidden_override,
                                   Rng& rng) {
    const BranchWidths w = widths_for(dim, hidden_override);
    if (model_kind == "proposed") {
        const FusionNetSpec spec =
            make_fusion_spec(meta.feature_dims, w.layer1, w.layer2, w.fusion_width);
        return std::make_unique<FusedModel>(spec, rng);
    }
    if (model_kind == "early") {
        const Index total =
            meta.feature_dims[0] + meta.feature_dims[1] + meta.feature_dims[2];
        return std::make_unique<MlpModel>(make_early_spec(total, w.fusion_width),
                                          rng);
    }
    if (is_unimodal(model_kind)) {
        const Modality mod = unimodal_modality(model_kind);
        const Index input_dim = meta.feature_dims[static_cast<int>(mod)];
        return std::make_unique<MlpModel>(
            unimodal_spec(mod, input_dim, dim, hidden_override), rng);
    }
    throw InputError("unknown model kind: " + model_kind);
}

std::unique_ptr<Model> model_from_checkpoint(const Checkpoint& ckpt) {
    if (ckpt.fused)
        return std::make_unique<FusedModel>(ckpt.fused->first, ckpt.fused->second);
    return std::make_unique<MlpModel>(ckpt.mono->first, ckpt.mono->second);
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string out;
    SynthConfig cfg;
    std::vector<double> snr{1.0, 1.0, 1.0};
    std::vector<double> delay{0.0, 0.0, 0.0};
    std::vector<Index> dims{16, 24, 12};
};

int cmd_synth(const SynthArgs& args) {
    SynthConfig cfg = args.cfg;
    if (args.snr.size() != 3 || args.delay.size() != 3 || args.dims.size() != 3)
        throw InputError("--snr, --delay and --dims each take 3 values");
    std::copy(args.snr.begin(), args.snr.end(), cfg.modality_snr.begin());
    std::copy(args.delay.begin(), args.delay.end(), cfg.delay_seconds.begin());
    std::copy(args.dims.begin(), args.dims.end(), cfg.feature_dims.begin());
    const Corpus corpus = generate_synthetic(cfg);
    write_corpus(corpus, args.out);
    std::cout << "wrote " << corpus.subjects.size() << " subjects to "
              << args.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string corpus;
    std::string out = "run";
    std::string dimension = "arousal";
    std::string model = "proposed";
    std::string optimizer = "adam";
    std::string monitor = "ccc";
    TrainConfig cfg;
    int train_subjects = 0;  // 0 = half the corpus
    int dev_select = 0;      // 0 = half the remainder
    std::uint64_t split_seed = 0;
    Index hidden = 0;  // 0 = per-dimension reference widths
    bool all_dimensions = false;
};

int train_one(const TrainArgs& args, const Corpus& corpus, Dimension dim) {
    const int n = static_cast<int>(corpus.subjects.size());
    int n_train = args.train_subjects > 0 ? args.train_subjects : n / 2;
    int n_select = args.dev_select > 0 ? args.dev_select : (n - n_train) / 2;
    if (n_train < 1) throw InputError("train: need at least one train subject");
    const Partition partition =
        split_partition(corpus.meta.subject_ids, n_train, n_select, args.split_seed);

    TrainConfig cfg = args.cfg;
    cfg.optimizer = parse_optimizer(args.optimizer);
    cfg.monitor = parse_monitor(args.monitor);

    const Pooled train_set = pool_subjects(corpus, partition.train, args.model, dim);
    const Pooled dev_set =
        pool_subjects(corpus, partition.dev_select, args.model, dim);

    Rng init_rng(cfg.rng_seed);
    auto model =
        build_model(args.model, dim, corpus.meta, args.hidden, init_rng);
    const TrainResult result =
        train(*model, train_set.x, train_set.y, dev_set.x, dev_set.y, cfg);

    Checkpoint ckpt;
    ckpt.model_kind = args.model;
    ckpt.dimension = to_string(dim);
    ckpt.monitor = args.monitor;
    ckpt.best_epoch = result.best_epoch;
    ckpt.best_dev_ccc = result.best_dev_ccc;
    ckpt.best_dev_mse = result.best_dev_mse;
    ckpt.frame_period_seconds = corpus.meta.frame_period_seconds;
    ckpt.label_stats = compute_label_stats(train_set.y);
    ckpt.partition = partition;
    if (args.model == "proposed") {
        auto& fused = dynamic_cast<FusedModel&>(*model);
        ckpt.fused = {fused.spec(), fused.params()};
    } else {
        auto& mlp = dynamic_cast<MlpModel&>(*model);
        ckpt.mono = {mlp.spec(), mlp.params()};
    }

    fs::create_directories(args.out);
    const std::string tag = sanitize(args.model) + "_" + to_string(dim);
    const fs::path ckpt_file = fs::path(args.out) / ("checkpoint_" + tag + ".json");
    save_checkpoint(ckpt_file, ckpt);

    const fs::path log_file = fs::path(args.out) / ("epoch_log_" + tag + ".csv");
    std::ofstream log(log_file);
    if (!log) throw LoadError("cannot write " + log_file.string());
    log << "epoch,train_mse,dev_ccc,dev_mse\n";
    for (const auto& stat : result.log)
        log << stat.epoch << ',' << format_double(stat.train_mse) << ','
            << format_double(stat.dev_ccc) << ',' << format_double(stat.dev_mse)
            << '\n';

    std::cout << "trained " << args.model << " " << to_string(dim)
              << ": best epoch " << result.best_epoch << ", dev ccc "
              << format_double(result.best_dev_ccc) << " -> "
              << ckpt_file.string() << "\n";
    return 0;
}

int cmd_train(const TrainArgs& args) {
    const Corpus corpus = load_corpus(args.corpus);
    if (args.all_dimensions) {
        for (Dimension d :
             {Dimension::arousal, Dimension::valence, Dimension::liking})
            train_one(args, corpus, d);
        return 0;
    }
    return train_one(args, corpus, parse_dimension(args.dimension));
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string corpus;
    std::string checkpoint;
    std::string out = "run";
    double delay = 0.0;
    std::vector<std::string> scalers{"none", "decimal", "stdratio"};
    bool literal_std_ratio = false;
};

// Per-subject predictions on a subject set, delay-shifted, then pooled.
Pooled predict_pooled(const Corpus& corpus, const Checkpoint& ckpt,
                      const Model& model, const std::vector<std::string>& ids,
                      double delay_seconds) {
    const Dimension dim = parse_dimension(ckpt.dimension);
    const DelaySpec spec{delay_seconds, ckpt.frame_period_seconds};
    Index total = 0;
    for (const auto& id : ids) total += corpus.subject(id).frames();
    Pooled out;
    out.x.resize(1, total);
    out.y.resize(total);
    Index at = 0;
    for (const auto& id : ids) {
        const auto& record = corpus.subject(id);
        const Vec pred = model.predict(subject_inputs(record, ckpt.model_kind));
        out.x.row(0).segment(at, pred.size()) =
            shift_series(pred, spec).transpose();
        out.y.segment(at, pred.size()) = record.label_column(dim);
        at += pred.size();
    }
    return out;
}

int cmd_eval(const EvalArgs& args) {
    const Corpus corpus = load_corpus(args.corpus);
    const Checkpoint ckpt = load_checkpoint(args.checkpoint);
    const auto model = model_from_checkpoint(ckpt);
    if (model->input_dim() !=
        subject_inputs(corpus.subjects.at(0), ckpt.model_kind).rows())
        throw InputError("eval: checkpoint input dim does not match corpus");

    const Pooled test =
        predict_pooled(corpus, ckpt, *model, ckpt.partition.dev_test, args.delay);
    const Vec raw = test.x.row(0);

    fs::create_directories(args.out);
    const std::string tag = sanitize(ckpt.model_kind) + "_" + ckpt.dimension;
    const fs::path file = fs::path(args.out) / ("eval_" + tag + ".csv");
    std::ofstream out(file);
    if (!out) throw LoadError("cannot write " + file.string());
    out << "model,dimension,scaler,ccc\n";
    for (const auto& name : args.scalers) {
        const ScalerKind kind = parse_scaler(name);
        const Vec scaled =
            apply_scaler(kind, raw, ckpt.label_stats, args.literal_std_ratio);
        const double score = ccc(scaled, test.y);
        out << ckpt.model_kind << ',' << ckpt.dimension << ',' << name << ','
            << format_double(score) << '\n';
        std::cout << ckpt.model_kind << ' ' << ckpt.dimension << ' ' << name
                  << " ccc " << format_double(score) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// delay-scan
// ---------------------------------------------------------------------------

struct DelayScanArgs {
    std::string corpus;
    std::string checkpoint;
    std::string out;
    double max = 3.0;
    double step = 0.1;
};

int cmd_delay_scan(const DelayScanArgs& args) {
    const Corpus corpus = load_corpus(args.corpus);
    const Checkpoint ckpt = load_checkpoint(args.checkpoint);
    const auto model = model_from_checkpoint(ckpt);
    const Dimension dim = parse_dimension(ckpt.dimension);

    std::vector<Vec> preds, golds;
    for (const auto& id : ckpt.partition.dev_test) {
        const auto& record = corpus.subject(id);
        preds.push_back(model->predict(subject_inputs(record, ckpt.model_kind)));
        golds.push_back(record.label_column(dim));
    }
    const DelayCurve curve = delay_scan_pooled(
        preds, golds, args.max, args.step, ckpt.frame_period_seconds);

    fs::path file = args.out.empty()
                        ? fs::path("run") / ("delay_curve_" + ckpt.dimension + ".csv")
                        : fs::path(args.out);
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw LoadError("cannot write " + file.string());
    out << "delay_s,ccc\n";
    for (const auto& [d, score] : curve.points)
        out << format_double(d) << ',' << format_double(score) << '\n';
    std::cout << "best delay " << format_double(curve.best_delay) << " s (ccc "
              << format_double(curve.best_ccc) << ") -> " << file.string()
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fuse-late
// ---------------------------------------------------------------------------

struct FuseLateArgs {
    std::string corpus;
    std::string audio_ckpt, video_ckpt, text_ckpt;
    std::string out = "run";
    std::string scaler = "none";
    double delay = 0.0;
    bool literal_std_ratio = false;
};

int cmd_fuse_late(const FuseLateArgs& args) {
    const Corpus corpus = load_corpus(args.corpus);
    const std::array<std::string, 3> files{args.audio_ckpt, args.video_ckpt,
                                           args.text_ckpt};
    std::array<Checkpoint, 3> ckpts;
    std::array<std::unique_ptr<Model>, 3> models;
    for (int m = 0; m < 3; ++m) {
        ckpts[m] = load_checkpoint(files[m]);
        models[m] = model_from_checkpoint(ckpts[m]);
    }
    for (int m = 1; m < 3; ++m) {
        if (ckpts[m].dimension != ckpts[0].dimension)
            throw InputError("fuse-late: checkpoints disagree on dimension");
        if (ckpts[m].partition.dev_select != ckpts[0].partition.dev_select ||
            ckpts[m].partition.dev_test != ckpts[0].partition.dev_test)
            throw InputError("fuse-late: checkpoints disagree on partition");
    }
    const ScalerKind kind = parse_scaler(args.scaler);

    auto modality_preds = [&](const std::vector<std::string>& ids,
                              int m) -> Vec {
        const Pooled p =
            predict_pooled(corpus, ckpts[m], *models[m], ids, args.delay);
        return apply_scaler(kind, p.x.row(0), ckpts[m].label_stats,
                            args.literal_std_ratio);
    };

    const Dimension dim = parse_dimension(ckpts[0].dimension);
    const auto& select_ids = ckpts[0].partition.dev_select;
    const auto& test_ids = ckpts[0].partition.dev_test;
    const Vec select_gold =
        pool_subjects(corpus, select_ids, "unimodal:audio", dim).y;
    const Vec test_gold = pool_subjects(corpus, test_ids, "unimodal:audio", dim).y;

    const LateFusionModel fusion =
        fit_late_fusion(modality_preds(select_ids, 0), modality_preds(select_ids, 1),
                        modality_preds(select_ids, 2), select_gold);
    const Eigen::Vector3d importance = modality_importance(fusion);

    const std::array<Vec, 3> test_preds{modality_preds(test_ids, 0),
                                        modality_preds(test_ids, 1),
                                        modality_preds(test_ids, 2)};
    const Vec fused =
        predict_late_fusion(fusion, test_preds[0], test_preds[1], test_preds[2]);
    const double fused_ccc = ccc(fused, test_gold);

    fs::create_directories(args.out);
    const std::string dim_name = ckpts[0].dimension;
    {
        const fs::path file =
            fs::path(args.out) / ("late_fusion_" + dim_name + ".csv");
        std::ofstream out(file);
        if (!out) throw LoadError("cannot write " + file.string());
        out << "dimension,coef_audio,coef_video,coef_text,intercept,"
               "rank_deficient,dev_test_ccc\n";
        out << dim_name << ',' << format_double(fusion.coefficients[0]) << ','
            << format_double(fusion.coefficients[1]) << ','
            << format_double(fusion.coefficients[2]) << ','
            << format_double(fusion.intercept) << ','
            << (fusion.rank_deficient ? 1 : 0) << ',' << format_double(fused_ccc)
            << '\n';
    }
    {
        const fs::path file =
            fs::path(args.out) / ("importance_" + dim_name + ".csv");
        std::ofstream out(file);
        if (!out) throw LoadError("cannot write " + file.string());
        out << "modality,percent\n";
        const std::array<Modality, 3> mods{Modality::audio, Modality::video,
                                           Modality::text};
        for (int m = 0; m < 3; ++m)
            out << to_string(mods[m]) << ',' << format_double(importance[m])
                << '\n';
    }
    {
        const fs::path file = fs::path(args.out) / ("eval_late_" + dim_name + ".csv");
        std::ofstream out(file);
        if (!out) throw LoadError("cannot write " + file.string());
        out << "model,dimension,scaler,ccc\n";
        out << "late," << dim_name << ',' << args.scaler << ','
            << format_double(fused_ccc) << '\n';
    }
    std::cout << "late fusion " << dim_name << ": dev_test ccc "
              << format_double(fused_ccc) << ", importance "
              << format_double(importance[0]) << "/"
              << format_double(importance[1]) << "/"
              << format_double(importance[2]) << " %\n";
    return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportArgs {
    std::string run = "run";
};

std::vector<std::vector<std::string>> read_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw LoadError("missing file: " + file.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

int cmd_report(const ReportArgs& args) {
    const fs::path run(args.run);
    if (!fs::is_directory(run))
        throw LoadError("report: run directory not found: " + run.string());

    std::vector<fs::path> eval_files, curve_files, importance_files;
    for (const auto& entry : fs::directory_iterator(run)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("eval_", 0) == 0) eval_files.push_back(entry.path());
        if (name.rfind("delay_curve_", 0) == 0) curve_files.push_back(entry.path());
        if (name.rfind("importance_", 0) == 0)
            importance_files.push_back(entry.path());
    }
    std::sort(eval_files.begin(), eval_files.end());
    std::sort(curve_files.begin(), curve_files.end());
    std::sort(importance_files.begin(), importance_files.end());
    if (eval_files.empty())
        throw LoadError("report: no eval_*.csv files in " + run.string());

    // Pivot eval rows into one row per model, one column per
    // dimension/scaler pair.
    std::map<std::string, std::map<std::string, std::string>> table;
    std::set<std::string> columns;
    for (const auto& file : eval_files) {
        const auto rows = read_csv(file);
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() != 4)
                throw LoadError("report: malformed row in " + file.string());
            const std::string col = rows[r][1] + "_" + rows[r][2];
            table[rows[r][0]][col] = rows[r][3];
            columns.insert(col);
        }
    }
    {
        const fs::path file = run / "table.csv";
        std::ofstream out(file);
        if (!out) throw LoadError("cannot write " + file.string());
        out << "model";
        for (const auto& col : columns) out << ',' << col;
        out << '\n';
        for (const auto& [model, cells] : table) {
            out << model;
            for (const auto& col : columns) {
                const auto it = cells.find(col);
                out << ',' << (it == cells.end() ? "" : it->second);
            }
            out << '\n';
        }
    }

    for (const auto& file : curve_files) {
        const auto rows = read_csv(file);
        double best = -2.0;
        std::size_t best_row = 1;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const double score = std::stod(rows[r].at(1));
            if (score > best) {
                best = score;
                best_row = r;
            }
        }
        const fs::path out_file = run / ("report_" + file.filename().string());
        std::ofstream out(out_file);
        if (!out) throw LoadError("cannot write " + out_file.string());
        out << "delay_s,ccc,is_argmax\n";
        for (std::size_t r = 1; r < rows.size(); ++r)
            out << rows[r][0] << ',' << rows[r][1] << ','
                << (r == best_row ? 1 : 0) << '\n';
    }

    if (!importance_files.empty()) {
        const fs::path out_file = run / "report_importance.csv";
        std::ofstream out(out_file);
        if (!out) throw LoadError("cannot write " + out_file.string());
        out << "dimension,modality,percent\n";
        for (const auto& file : importance_files) {
            const std::string stem = file.stem().string();
            const std::string dim = stem.substr(std::string("importance_").size());
            const auto rows = read_csv(file);
            double total = 0.0;
            for (std::size_t r = 1; r < rows.size(); ++r) {
                out << dim << ',' << rows[r].at(0) << ',' << rows[r].at(1) << '\n';
                total += std::stod(rows[r].at(1));
            }
            if (std::abs(total - 100.0) > 1e-6)
                throw LoadError("report: importance rows in " + file.string() +
                                " sum to " + format_double(total));
        }
    }

    std::cout << "report written to " << run.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multimodal emotion regression pipeline"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    synth->add_option("--out", synth_args.out, "output corpus directory")
        ->required();
    synth->add_option("--subjects", synth_args.cfg.n_subjects)
        ->check(CLI::PositiveNumber);
    synth->add_option("--frames", synth_args.cfg.frames_per_subject)
        ->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_args.cfg.rng_seed);
    synth->add_option("--latent-dim", synth_args.cfg.latent_dim)
        ->check(CLI::PositiveNumber);
    synth->add_option("--noise-sigma", synth_args.cfg.noise_sigma);
    synth->add_option("--snr", synth_args.snr, "per-modality signal gain")
        ->expected(3);
    synth->add_option("--delay", synth_args.delay,
                      "per-dimension label delay in seconds")
        ->expected(3);
    synth->add_option("--dims", synth_args.dims, "feature dims (audio video text)")
        ->expected(3);
    synth->add_option("--frame-period", synth_args.cfg.frame_period_seconds);
    synth->add_option("--smoothness", synth_args.cfg.latent_smoothness);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "train a model");
    train_cmd->add_option("--corpus", train_args.corpus)->required();
    train_cmd->add_option("--out", train_args.out, "run directory");
    train_cmd->add_option("--dimension", train_args.dimension);
    train_cmd->add_flag("--all", train_args.all_dimensions,
                        "train all three dimensions");
    train_cmd->add_option("--model", train_args.model,
                          "proposed | early | unimodal:<modality>");
    train_cmd->add_option("--epochs", train_args.cfg.epochs)
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", train_args.cfg.learning_rate);
    train_cmd->add_option("--batch-size", train_args.cfg.batch_size)
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", train_args.cfg.rng_seed);
    train_cmd->add_option("--optimizer", train_args.optimizer, "sgd | adam");
    train_cmd->add_option("--monitor", train_args.monitor, "ccc | loss");
    train_cmd->add_option("--train-subjects", train_args.train_subjects);
    train_cmd->add_option("--dev-select", train_args.dev_select);
    train_cmd->add_option("--split-seed", train_args.split_seed);
    train_cmd->add_option("--hidden", train_args.hidden,
                          "override all hidden widths (0 = per-dimension table)");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
    eval_cmd->add_option("--corpus", eval_args.corpus)->required();
    eval_cmd->add_option("--checkpoint", eval_args.checkpoint)->required();
    eval_cmd->add_option("--out", eval_args.out, "run directory");
    eval_cmd->add_option("--delay", eval_args.delay, "delay compensation (s)");
    eval_cmd->add_option("--scaler", eval_args.scalers,
                         "scaler columns to report");
    eval_cmd->add_flag("--std-ratio-literal", eval_args.literal_std_ratio,
                       "apply the printed sigma_p/sigma_l ratio");

    DelayScanArgs scan_args;
    auto* scan_cmd =
        app.add_subcommand("delay-scan", "CCC as a function of delay");
    scan_cmd->add_option("--corpus", scan_args.corpus)->required();
    scan_cmd->add_option("--checkpoint", scan_args.checkpoint)->required();
    scan_cmd->add_option("--max", scan_args.max);
    scan_cmd->add_option("--step", scan_args.step);
    scan_cmd->add_option("--out", scan_args.out, "output CSV file");

    FuseLateArgs fuse_args;
    auto* fuse_cmd =
        app.add_subcommand("fuse-late", "late score-level fusion");
    fuse_cmd->add_option("--corpus", fuse_args.corpus)->required();
    fuse_cmd->add_option("--audio", fuse_args.audio_ckpt)->required();
    fuse_cmd->add_option("--video", fuse_args.video_ckpt)->required();
    fuse_cmd->add_option("--text", fuse_args.text_ckpt)->required();
    fuse_cmd->add_option("--out", fuse_args.out, "run directory");
    fuse_cmd->add_option("--scaler", fuse_args.scaler,
                         "scaler applied to unimodal predictions");
    fuse_cmd->add_option("--delay", fuse_args.delay);
    fuse_cmd->add_flag("--std-ratio-literal", fuse_args.literal_std_ratio);

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "aggregate run outputs");
    report_cmd->add_option("--run", report_args.run, "run directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(synth_args);
        if (train_cmd->parsed()) return cmd_train(train_args);
        if (eval_cmd->parsed()) return cmd_eval(eval_args);
        if (scan_cmd->parsed()) return cmd_delay_scan(scan_args);
        if (fuse_cmd->parsed()) return cmd_fuse_late(fuse_args);
        if (report_cmd->parsed()) return cmd_report(report_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
