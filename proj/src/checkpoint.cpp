#include "emofuse/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace emofuse {

using nlohmann::json;

namespace {

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const json& j) {
    const Index rows = static_cast<Index>(j.size());
    if (rows == 0) throw LoadError("checkpoint: empty matrix");
    const Index cols = static_cast<Index>(j.at(0).size());
    Mat m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<Index>(row.size()) != cols)
            throw LoadError("checkpoint: ragged matrix");
        for (Index c = 0; c < cols; ++c)
            m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

json params_to_json(const NetworkParams& params) {
    json layers = json::array();
    for (const auto& layer : params) {
        json l;
        l["weights"] = matrix_to_json(layer.weights);
        l["bias"] = std::vector<double>(layer.bias.begin(), layer.bias.end());
        layers.push_back(std::move(l));
    }
    return layers;
}

NetworkParams params_from_json(const json& j) {
    NetworkParams params;
    for (const auto& l : j) {
        LayerParams layer;
        layer.weights = matrix_from_json(l.at("weights"));
        const auto bias = l.at("bias").get<std::vector<double>>();
        layer.bias = Eigen::Map<const Vec>(bias.data(),
                                           static_cast<Index>(bias.size()));
        params.push_back(std::move(layer));
    }
    return params;
}

std::string activation_name(Activation a) {
    return a == Activation::relu ? "relu" : "linear";
}

Activation activation_from(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "linear") return Activation::linear;
    throw LoadError("checkpoint: unknown activation " + s);
}

json spec_to_json(const NetworkSpec& spec) {
    json layers = json::array();
    for (const auto& l : spec)
        layers.push_back({{"in", l.in_dim},
                          {"out", l.out_dim},
                          {"activation", activation_name(l.activation)}});
    return layers;
}

NetworkSpec spec_from_json(const json& j) {
    NetworkSpec spec;
    for (const auto& l : j)
        spec.push_back({l.at("in").get<Index>(), l.at("out").get<Index>(),
                        activation_from(l.at("activation"))});
    return spec;
}

json fusion_spec_to_json(const FusionNetSpec& spec) {
    json branches = json::array();
    for (const auto& b : spec.branches)
        branches.push_back({{"modality", to_string(b.modality)},
                            {"input_dim", b.input_dim},
                            {"layer1", b.layer1},
                            {"layer2", b.layer2}});
    return {{"branches", std::move(branches)},
            {"fusion_width", spec.fusion_width}};
}

FusionNetSpec fusion_spec_from_json(const json& j) {
    FusionNetSpec spec;
    const auto& branches = j.at("branches");
    if (branches.size() != 3) throw LoadError("checkpoint: need 3 branches");
    for (int m = 0; m < 3; ++m) {
        const auto& b = branches.at(static_cast<std::size_t>(m));
        spec.branches[m] = {parse_modality(b.at("modality").get<std::string>()),
                            b.at("input_dim").get<Index>(),
                            b.at("layer1").get<Index>(),
                            b.at("layer2").get<Index>()};
    }
    spec.fusion_width = j.at("fusion_width").get<Index>();
    return spec;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& file, const Checkpoint& ckpt) {
    if (ckpt.fused.has_value() == ckpt.mono.has_value())
        throw InputError("checkpoint: exactly one of fused/mono must be set");
    json j;
    j["format"] = "emofuse-checkpoint-v1";
    j["model"] = ckpt.model_kind;
    j["dimension"] = ckpt.dimension;
    j["monitor"] = ckpt.monitor;
    j["best_epoch"] = ckpt.best_epoch;
    j["best_dev_ccc"] = ckpt.best_dev_ccc;
    j["best_dev_mse"] = ckpt.best_dev_mse;
    j["frame_period_seconds"] = ckpt.frame_period_seconds;
    j["label_stats"] = {{"min", ckpt.label_stats.min_l},
                        {"max", ckpt.label_stats.max_l},
                        {"sigma", ckpt.label_stats.sigma_l}};
    j["partition"] = {{"train", ckpt.partition.train},
                      {"dev_select", ckpt.partition.dev_select},
                      {"dev_test", ckpt.partition.dev_test}};
    if (ckpt.fused) {
        j["fused"] = fusion_spec_to_json(ckpt.fused->first);
        json branch_params = json::array();
        for (const auto& bp : ckpt.fused->second.branches)
            branch_params.push_back(params_to_json(bp));
        j["fused"]["branch_params"] = std::move(branch_params);
        j["fused"]["trunk_params"] = params_to_json(ckpt.fused->second.trunk);
    } else {
        j["mono"] = {{"spec", spec_to_json(ckpt.mono->first)},
                     {"params", params_to_json(ckpt.mono->second)}};
    }
    std::ofstream out(file);
    if (!out) throw LoadError("cannot write " + file.string());
    out << j.dump(2) << '\n';
    if (!out) throw LoadError("write failed: " + file.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw LoadError("missing file: " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw LoadError(file.string() + ": " + e.what());
    }
    try {
        if (j.at("format") != "emofuse-checkpoint-v1")
            throw LoadError(file.string() + ": unknown checkpoint format");
        Checkpoint ckpt;
        ckpt.model_kind = j.at("model");
        ckpt.dimension = j.at("dimension");
        ckpt.monitor = j.at("monitor");
        ckpt.best_epoch = j.at("best_epoch");
        ckpt.best_dev_ccc = j.at("best_dev_ccc");
        ckpt.best_dev_mse = j.at("best_dev_mse");
        ckpt.frame_period_seconds = j.at("frame_period_seconds");
        const auto& stats = j.at("label_stats");
        ckpt.label_stats = {stats.at("min"), stats.at("max"), stats.at("sigma")};
        const auto& part = j.at("partition");
        ckpt.partition.train = part.at("train").get<std::vector<std::string>>();
        ckpt.partition.dev_select =
            part.at("dev_select").get<std::vector<std::string>>();
        ckpt.partition.dev_test =
            part.at("dev_test").get<std::vector<std::string>>();
        if (j.contains("fused")) {
            FusionNetSpec spec = fusion_spec_from_json(j.at("fused"));
            FusedParams params;
            const auto& bp = j.at("fused").at("branch_params");
            if (bp.size() != 3) throw LoadError("checkpoint: need 3 branches");
            for (int m = 0; m < 3; ++m)
                params.branches[m] = params_from_json(bp.at(static_cast<std::size_t>(m)));
            params.trunk = params_from_json(j.at("fused").at("trunk_params"));
            ckpt.fused = {std::move(spec), std::move(params)};
        } else {
            ckpt.mono = {spec_from_json(j.at("mono").at("spec")),
                         params_from_json(j.at("mono").at("params"))};
        }
        return ckpt;
    } catch (const json::exception& e) {
        throw LoadError(file.string() + ": " + e.what());
    }
}

}  // namespace emofuse
