#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <string_view>

namespace emofuse {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateInputError : std::domain_error {
    using std::domain_error::domain_error;
};

struct TrainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Dimension { arousal, valence, liking };
enum class Modality { audio, video, text };

inline constexpr int kNumDimensions = 3;
inline constexpr int kNumModalities = 3;

inline std::string to_string(Dimension d) {
    switch (d) {
        case Dimension::arousal: return "arousal";
        case Dimension::valence: return "valence";
        case Dimension::liking: return "liking";
    }
    throw InputError("unknown dimension");
}

inline std::string to_string(Modality m) {
    switch (m) {
        case Modality::audio: return "audio";
        case Modality::video: return "video";
        case Modality::text: return "text";
    }
    throw InputError("unknown modality");
}

inline Dimension parse_dimension(std::string_view s) {
    if (s == "arousal") return Dimension::arousal;
    if (s == "valence") return Dimension::valence;
    if (s == "liking") return Dimension::liking;
    throw InputError("unknown dimension: " + std::string(s));
}

inline Modality parse_modality(std::string_view s) {
    if (s == "audio") return Modality::audio;
    if (s == "video") return Modality::video;
    if (s == "text") return Modality::text;
    throw InputError("unknown modality: " + std::string(s));
}

}  // namespace emofuse
