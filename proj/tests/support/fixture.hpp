#pragma once

// The 200-image synthetic CPS fixture: 100 sharp textures predicted
// correctly with high confidence, 100 sigma-3 blurred textures with low
// confidence and a 40% misclassification rate. Deterministic in the seed.

#include <filesystem>
#include <string>
#include <vector>

#include "qualgate/cutoff.hpp"
#include "qualgate/gating.hpp"
#include "qualgate/image.hpp"
#include "qualgate/io.hpp"
#include "support/synth.hpp"

namespace testsupport {

struct CpsImage {
    std::string id;
    qualgate::GrayImage image;
    bool sharp = false;
    qualgate::PredictionRow prediction;
};

inline std::vector<CpsImage> make_cps_fixture(uint64_t seed, int count_per_class = 100,
                                              int side = 128) {
    Sampler sampler(seed);
    std::vector<CpsImage> out;
    for (int i = 0; i < 2 * count_per_class; ++i) {
        CpsImage entry;
        const bool sharp = i < count_per_class;
        char id[16];
        std::snprintf(id, sizeof(id), "fx%03d", i);
        entry.id = id;
        entry.sharp = sharp;
        entry.image = textured_photo(side, side, seed * 31 + i);
        if (!sharp) entry.image = qualgate::gaussian_blur(entry.image, 3.0);

        entry.prediction.image_id = entry.id;
        if (sharp) {
            entry.prediction.confidence = std::clamp(0.95 + 0.03 * (2.0 * sampler.uniform01() - 1.0), 0.0, 1.0);
            entry.prediction.predicted_label = "a";
            entry.prediction.true_label = "a";
        } else {
            entry.prediction.confidence = std::clamp(0.55 + 0.05 * (2.0 * sampler.uniform01() - 1.0), 0.0, 1.0);
            entry.prediction.true_label = "a";
            entry.prediction.predicted_label = (i % 5 < 2) ? "b" : "a"; // 40% incorrect
        }
        out.push_back(std::move(entry));
    }
    return out;
}

inline qualgate::PredictionLog cps_prediction_log(const std::vector<CpsImage>& fixture) {
    qualgate::PredictionLog log;
    for (const CpsImage& entry : fixture) log.add(entry.prediction);
    return log;
}

/// Write the fixture as a CLI-consumable workspace: images/, dataset.csv,
/// predictions.csv.
inline void write_cps_workspace(const std::vector<CpsImage>& fixture,
                                const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "images");
    std::string dataset = "image_id,path,label,split\n";
    std::string predictions = "image_id,confidence,predicted_label,true_label\n";
    for (const CpsImage& entry : fixture) {
        const fs::path img_path = dir / "images" / (entry.id + ".png");
        qualgate::save_image_png(entry.image, img_path);
        dataset += entry.id + "," + img_path.string() + "," + entry.prediction.true_label +
                   ",train\n";
        predictions += entry.id + "," + qualgate::format_double(entry.prediction.confidence) +
                       "," + entry.prediction.predicted_label + "," +
                       entry.prediction.true_label + "\n";
    }
    qualgate::atomic_write_file(dir / "dataset.csv", dataset);
    qualgate::atomic_write_file(dir / "predictions.csv", predictions);
}

} // namespace testsupport
