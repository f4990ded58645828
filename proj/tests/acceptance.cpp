// Acceptance suite: one pass/fail line per criterion. argv[1] is the path
// to the emofuse binary (used by the end-to-end criteria).

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "emofuse/align.hpp"
#include "emofuse/data.hpp"
#include "emofuse/fusion.hpp"
#include "emofuse/metrics.hpp"
#include "emofuse/nn.hpp"
#include "emofuse/postproc.hpp"
#include "emofuse/rng.hpp"

namespace fs = std::filesystem;
using namespace emofuse;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::string cli;
fs::path scratch;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
              << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

Vec random_vec(Rng& rng, Index n, double scale) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = scale * rng.gaussian();
    return v;
}

// --------------------------------------------------------------------------
// criterion 1: metric oracles
// --------------------------------------------------------------------------

double ccc_oracle(const Vec& p, const Vec& g) {
    const Index m = p.size();
    double mean_p = 0.0, mean_g = 0.0;
    for (Index i = 0; i < m; ++i) {
        mean_p += p[i];
        mean_g += g[i];
    }
    mean_p /= static_cast<double>(m);
    mean_g /= static_cast<double>(m);
    double var_p = 0.0, var_g = 0.0, cov = 0.0;
    for (Index i = 0; i < m; ++i) {
        var_p += (p[i] - mean_p) * (p[i] - mean_p);
        var_g += (g[i] - mean_g) * (g[i] - mean_g);
        cov += (p[i] - mean_p) * (g[i] - mean_g);
    }
    var_p /= static_cast<double>(m);
    var_g /= static_cast<double>(m);
    cov /= static_cast<double>(m);
    return 2.0 * cov / (var_p + var_g + (mean_p - mean_g) * (mean_p - mean_g));
}

double mse_oracle(const Vec& p, const Vec& g) {
    double sum = 0.0;
    for (Index i = 0; i < p.size(); ++i) sum += (p[i] - g[i]) * (p[i] - g[i]);
    return sum / static_cast<double>(p.size());
}

void criterion_metrics() {
    const auto start = Clock::now();
    Rng rng(1);
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.uniform_int(499));
        const Vec p = random_vec(rng, n, 1.0 + 10.0 * rng.uniform());
        const Vec g = random_vec(rng, n, 1.0 + 10.0 * rng.uniform());
        const double got = ccc(p, g);
        const double want = ccc_oracle(p, g);
        ok = ok && std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want));
        ok = ok && std::abs(mse(p, g) - mse_oracle(p, g)) <=
                       1e-12 * std::max(1.0, mse_oracle(p, g));
        ok = ok && std::abs(ccc(p, p) - 1.0) <= 1e-12;
        ok = ok && std::abs(got) <= 1.0;
        ok = ok && std::abs(ccc(g, p) - got) <= 1e-12;
    }
    const double elapsed = seconds_since(start);
    report(1, "metric oracles", ok && elapsed < 5.0,
           "1000 random pairs, " + std::to_string(elapsed) + " s");
}

// --------------------------------------------------------------------------
// criterion 2: gradient correctness
// --------------------------------------------------------------------------

double net_loss(const NetworkSpec& spec, const NetworkParams& params,
                const Mat& X, const Mat& Y) {
    const Mat pred = forward_batch(spec, params, X);
    return (pred - Y).squaredNorm() / static_cast<double>(X.cols());
}

void criterion_gradients() {
    const auto start = Clock::now();
    Rng rng(2);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Index in_dim = 1 + static_cast<Index>(rng.uniform_int(8));
        const int depth = 1 + static_cast<int>(rng.uniform_int(3));
        NetworkSpec spec;
        Index prev = in_dim;
        for (int l = 0; l < depth; ++l) {
            const Index width =
                l + 1 == depth ? 1 : 1 + static_cast<Index>(rng.uniform_int(16));
            spec.push_back({prev, width,
                            l + 1 == depth ? Activation::linear : Activation::relu});
            prev = width;
        }
        NetworkParams params = init_params(spec, rng);
        // nonzero biases keep preactivations away from the relu kink, where
        // central differences are not a valid derivative oracle
        for (auto& layer : params)
            for (Index i = 0; i < layer.bias.size(); ++i)
                layer.bias[i] = rng.uniform(0.05, 0.25);
        const Index n = 1 + static_cast<Index>(rng.uniform_int(6));
        Mat X(in_dim, n), Y(1, n);
        for (Index i = 0; i < X.size(); ++i) X(i) = rng.gaussian();
        for (Index i = 0; i < n; ++i) Y(0, i) = rng.gaussian();

        const Gradients analytic = backward(spec, params, X, Y);
        const double h = 1e-5;
        for (std::size_t l = 0; l < params.size(); ++l) {
            for (Index i = 0; i < params[l].weights.size(); ++i) {
                const double saved = params[l].weights(i);
                params[l].weights(i) = saved + h;
                const double up = net_loss(spec, params, X, Y);
                params[l].weights(i) = saved - h;
                const double down = net_loss(spec, params, X, Y);
                params[l].weights(i) = saved;
                const double fd = (up - down) / (2.0 * h);
                worst = std::max(worst, std::abs(analytic[l].weights(i) - fd) /
                                            std::max(1.0, std::abs(fd)));
            }
            for (Index i = 0; i < params[l].bias.size(); ++i) {
                const double saved = params[l].bias[i];
                params[l].bias[i] = saved + h;
                const double up = net_loss(spec, params, X, Y);
                params[l].bias[i] = saved - h;
                const double down = net_loss(spec, params, X, Y);
                params[l].bias[i] = saved;
                const double fd = (up - down) / (2.0 * h);
                worst = std::max(worst, std::abs(analytic[l].bias[i] - fd) /
                                            std::max(1.0, std::abs(fd)));
            }
        }
    }
    ok = worst <= 1e-4;
    const double elapsed = seconds_since(start);
    report(2, "gradient correctness", ok && elapsed < 30.0,
           "50 nets, max rel err " + std::to_string(worst) + ", " +
               std::to_string(elapsed) + " s");
}

// --------------------------------------------------------------------------
// criterion 3: architecture fidelity
// --------------------------------------------------------------------------

void criterion_architecture() {
    bool ok = true;
    const FusionNetSpec arousal = build_proposed(Dimension::arousal);
    ok = ok && arousal.trunk_input_dim() == 350 && arousal.fusion_width == 100;
    const FusionNetSpec valence = build_proposed(Dimension::valence);
    ok = ok && valence.trunk_input_dim() == 600 && valence.fusion_width == 200;
    const FusionNetSpec liking = build_proposed(Dimension::liking);
    ok = ok && liking.trunk_input_dim() == 250 && liking.fusion_width == 50;

    Rng rng(3);
    const FusedParams params = init_fused_params(arousal, rng);
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const Vec xa = random_vec(rng, 1000, 1.0);
        const Vec xv = random_vec(rng, 3000, 1.0);
        const Vec xt = random_vec(rng, 521, 1.0);
        Vec merged(arousal.trunk_input_dim());
        Index at = 0;
        const std::array<const Vec*, 3> xs{&xa, &xv, &xt};
        for (int m = 0; m < 3; ++m) {
            const Vec h = forward(branch_network_spec(arousal.branches[m]),
                                  params.branches[m], *xs[m]);
            merged.segment(at, h.size()) = h;
            at += h.size();
        }
        const double want =
            forward(trunk_network_spec(arousal), params.trunk, merged)[0];
        ok = forward_fused(arousal, params, xa, xv, xt) == want;
    }
    report(3, "architecture fidelity", ok);
}

// --------------------------------------------------------------------------
// criterion 4: scaler contracts
// --------------------------------------------------------------------------

void criterion_scalers() {
    Rng rng(4);
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.uniform_int(300));
        const Vec y = random_vec(rng, n, std::pow(10.0, rng.uniform(-4.0, 4.0)));
        if (y.minCoeff() == y.maxCoeff()) continue;
        const LabelStats stats{rng.uniform(-2.0, 0.0), rng.uniform(0.1, 3.0),
                               rng.uniform(0.01, 5.0)};
        const Vec mm = min_max_scale(y, stats);
        ok = ok && std::abs(mm.minCoeff() - stats.min_l) <= 1e-10;
        ok = ok && std::abs(mm.maxCoeff() - stats.max_l) <= 1e-10;
        const Vec sr = std_ratio_scale(y, stats);
        ok = ok && std::abs(population_std(sr) - stats.sigma_l) <=
                       1e-10 * stats.sigma_l;
        const auto dec = decimal_scale(y);
        const double peak = dec.values.cwiseAbs().maxCoeff();
        ok = ok && peak < 1.0 && 10.0 * peak >= 1.0;
    }
    report(4, "scaler contracts", ok);
}

// --------------------------------------------------------------------------
// criteria 5-7: end-to-end runs through the CLI
// --------------------------------------------------------------------------

double csv_eval_ccc(const fs::path& file, const std::string& scaler) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("missing " + file.string());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string model, dimension, kind, value;
        std::getline(ss, model, ',');
        std::getline(ss, dimension, ',');
        std::getline(ss, kind, ',');
        std::getline(ss, value, ',');
        if (kind == scaler) return std::stod(value);
    }
    throw std::runtime_error("no " + scaler + " row in " + file.string());
}

double csv_curve_argmax(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("missing " + file.string());
    std::string line;
    std::getline(in, line);
    double best = -2.0, best_d = -1.0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string d, score;
        std::getline(ss, d, ',');
        std::getline(ss, score, ',');
        if (std::stod(score) > best) {
            best = std::stod(score);
            best_d = std::stod(d);
        }
    }
    return best_d;
}

std::map<std::string, double> csv_importance(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("missing " + file.string());
    std::map<std::string, double> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string modality, percent;
        std::getline(ss, modality, ',');
        std::getline(ss, percent, ',');
        out[modality] = std::stod(percent);
    }
    return out;
}

double csv_late_ccc(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("missing " + file.string());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    const std::size_t comma = row.rfind(',');
    return std::stod(row.substr(comma + 1));
}

void must(const std::string& cmd) {
    if (run(cmd) != 0) throw std::runtime_error("command failed: " + cmd);
}

// criterion 5: injected 1.5 s delay
void run_delay_phase(const fs::path& root) {
    const fs::path delay_corpus = root / "corpus_delay";
    const fs::path delay_run = root / "run_delay";
    must(cli + " synth --out " + delay_corpus.string() +
         " --subjects 12 --frames 300 --dims 12 16 10 --latent-dim 6"
         " --noise-sigma 0.4 --snr 1 1 1 --delay 1.5 0 0 --seed 501");
    must(cli + " train --corpus " + delay_corpus.string() + " --out " +
         delay_run.string() +
         " --model unimodal:audio --dimension arousal --hidden 16 --epochs 15"
         " --train-subjects 6 --dev-select 3 --seed 502 --split-seed 503");
    must(cli + " delay-scan --corpus " + delay_corpus.string() +
         " --checkpoint " +
         (delay_run / "checkpoint_unimodal-audio_arousal.json").string() +
         " --max 3.0 --step 0.1 --out " +
         (delay_run / "delay_curve_arousal.csv").string());
}

// criterion 6: proposed fusion vs unimodal models on all dimensions
void run_fusion_phase(const fs::path& root) {
    const fs::path fusion_corpus = root / "corpus_fusion";
    const fs::path fusion_run = root / "run_fusion";
    must(cli + " synth --out " + fusion_corpus.string() +
         " --subjects 20 --frames 500 --dims 16 24 12 --latent-dim 8"
         " --noise-sigma 1.0 --snr 0.8 0.8 0.8 --seed 601");
    const std::string fusion_train_flags =
        " --corpus " + fusion_corpus.string() + " --out " + fusion_run.string() +
        " --hidden 16 --epochs 60 --train-subjects 10 --dev-select 4"
        " --seed 602 --split-seed 603 --all";
    for (const std::string model :
         {"proposed", "unimodal:audio", "unimodal:video", "unimodal:text"})
        must(cli + " train --model " + model + fusion_train_flags);
    for (const std::string model :
         {"proposed", "unimodal-audio", "unimodal-video", "unimodal-text"})
        for (const std::string dim : {"arousal", "valence", "liking"})
            must(cli + " eval --corpus " + fusion_corpus.string() +
                 " --checkpoint " +
                 (fusion_run / ("checkpoint_" + model + "_" + dim + ".json"))
                     .string() +
                 " --out " + fusion_run.string());
    must(cli + " report --run " + fusion_run.string());
}

// criterion 7: late fusion with a pure-noise text modality
void run_late_phase(const fs::path& root) {
    const fs::path late_corpus = root / "corpus_late";
    const fs::path late_run = root / "run_late";
    must(cli + " synth --out " + late_corpus.string() +
         " --subjects 16 --frames 400 --dims 14 18 10 --latent-dim 6"
         " --noise-sigma 0.8 --snr 0.8 0.8 0 --seed 701");
    const std::string late_train_flags =
        " --corpus " + late_corpus.string() + " --out " + late_run.string() +
        " --dimension arousal --hidden 16 --epochs 25 --train-subjects 8"
        " --dev-select 3 --seed 702 --split-seed 703";
    for (const std::string model :
         {"unimodal:audio", "unimodal:video", "unimodal:text"})
        must(cli + " train --model " + model + late_train_flags);
    for (const std::string model :
         {"unimodal-audio", "unimodal-video", "unimodal-text"})
        must(cli + " eval --corpus " + late_corpus.string() + " --checkpoint " +
             (late_run / ("checkpoint_" + model + "_arousal.json")).string() +
             " --out " + late_run.string());
    must(cli + " fuse-late --corpus " + late_corpus.string() + " --audio " +
         (late_run / "checkpoint_unimodal-audio_arousal.json").string() +
         " --video " +
         (late_run / "checkpoint_unimodal-video_arousal.json").string() +
         " --text " +
         (late_run / "checkpoint_unimodal-text_arousal.json").string() +
         " --out " + late_run.string());
    must(cli + " report --run " + late_run.string());
}

void criterion_delay_recovery(const fs::path& root, double elapsed) {
    const double argmax =
        csv_curve_argmax(root / "run_delay" / "delay_curve_arousal.csv");
    const bool ok = std::abs(argmax - 1.5) <= 0.1 + 1e-9;
    report(5, "delay recovery", ok && elapsed < 10.0,
           "argmax " + std::to_string(argmax) + " s, " +
               std::to_string(elapsed) + " s runtime");
}

void criterion_fusion_end_to_end(const fs::path& root, double elapsed) {
    const fs::path run_dir = root / "run_fusion";
    bool ok = true;
    std::string detail;
    for (const std::string dim : {"arousal", "valence", "liking"}) {
        const double proposed =
            csv_eval_ccc(run_dir / ("eval_proposed_" + dim + ".csv"), "none");
        double best_unimodal = -2.0;
        for (const std::string m :
             {"unimodal-audio", "unimodal-video", "unimodal-text"})
            best_unimodal = std::max(
                best_unimodal,
                csv_eval_ccc(run_dir / ("eval_" + m + "_" + dim + ".csv"), "none"));
        ok = ok && proposed >= 0.7 && proposed > best_unimodal;
        detail += dim + " " + std::to_string(proposed) + ">" +
                  std::to_string(best_unimodal) + " ";
    }
    report(6, "end-to-end synthetic fusion", ok && elapsed < 300.0,
           detail + std::to_string(elapsed) + " s runtime");
}

void criterion_late_fusion(const fs::path& root) {
    const fs::path run_dir = root / "run_late";
    const auto importance = csv_importance(run_dir / "importance_arousal.csv");
    const double late_ccc = csv_late_ccc(run_dir / "late_fusion_arousal.csv");
    double best_unimodal = -2.0;
    for (const std::string m :
         {"unimodal-audio", "unimodal-video", "unimodal-text"})
        best_unimodal = std::max(
            best_unimodal,
            csv_eval_ccc(run_dir / ("eval_" + m + "_arousal.csv"), "none"));
    const bool ok = std::abs(importance.at("text")) < 10.0 &&
                    late_ccc >= best_unimodal - 0.02;
    report(7, "late-fusion sanity", ok,
           "text importance " + std::to_string(importance.at("text")) +
               " %, late ccc " + std::to_string(late_ccc) + " vs best unimodal " +
               std::to_string(best_unimodal));
}

void criterion_determinism(const fs::path& first, const fs::path& second) {
    bool ok = true;
    std::string detail;
    std::vector<fs::path> first_files;
    for (const auto& entry : fs::recursive_directory_iterator(first))
        if (entry.is_regular_file())
            first_files.push_back(fs::relative(entry.path(), first));
    for (const auto& rel : first_files) {
        std::ifstream a(first / rel, std::ios::binary);
        std::ifstream b(second / rel, std::ios::binary);
        if (!b) {
            ok = false;
            detail = "missing " + rel.string();
            break;
        }
        std::ostringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        if (sa.str() != sb.str()) {
            ok = false;
            detail = "differs: " + rel.string();
            break;
        }
    }
    report(8, "determinism", ok, detail.empty() ? std::to_string(first_files.size()) + " files identical" : detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <emofuse-binary>\n";
        return 2;
    }
    cli = argv[1];
    scratch = fs::temp_directory_path() /
              ("emofuse_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(scratch);

    criterion_metrics();
    criterion_gradients();
    criterion_architecture();
    criterion_scalers();

    try {
        const fs::path first = scratch / "first";
        fs::create_directories(first);
        const auto start5 = Clock::now();
        run_delay_phase(first);
        const double delay_elapsed = seconds_since(start5);
        const auto start6 = Clock::now();
        run_fusion_phase(first);
        const double fusion_elapsed = seconds_since(start6);
        run_late_phase(first);
        criterion_delay_recovery(first, delay_elapsed);
        criterion_fusion_end_to_end(first, fusion_elapsed);
        criterion_late_fusion(first);

        const fs::path second = scratch / "second";
        fs::create_directories(second);
        run_delay_phase(second);
        run_fusion_phase(second);
        run_late_phase(second);
        criterion_determinism(first, second);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] criteria 5-8 aborted: " << e.what() << std::endl;
        ++failures;
    }

    fs::remove_all(scratch);
    if (failures == 0) {
        std::cout << "acceptance: all criteria passed" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria failed" << std::endl;
    return 1;
}
