#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "qualgate/io.hpp"
#include "support/fixture.hpp"
#include "support/synth.hpp"

using namespace qualgate;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "qualgate_cli_out.txt";
    const std::string command =
        std::string(QUALGATE_BIN) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (fs::exists(log)) result.output = read_file(log);
    return result;
}

const fs::path& workspace() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "qualgate_cli_ws";
        fs::remove_all(d);
        const auto fixture = testsupport::make_cps_fixture(7001, 30, 96);
        testsupport::write_cps_workspace(fixture, d);
        return d;
    }();
    return dir;
}

} // namespace

TEST_CASE("score produces one row per image and method") {
    const fs::path ws = workspace();
    const fs::path out = ws / "scores.csv";
    const RunResult r = run_cli("--quiet score --images " + (ws / "images").string() +
                                " --methods lapv --out " + out.string());
    CHECK(r.exit_code == 0);
    const ScoreTable table = score_table_from_csv(read_file(out));
    CHECK(table.size() == 60); // 2*30 images x 1 method
}

TEST_CASE("missing input directory exits 1 with no partial outputs") {
    const fs::path out = fs::temp_directory_path() / "qualgate_should_not_exist.csv";
    fs::remove(out);
    const RunResult r = run_cli("--quiet score --images /nonexistent_dir_qualgate --out " +
                                out.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("InvalidParam") != std::string::npos);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("malformed data exits 2") {
    const fs::path ws = workspace();
    const fs::path bad = ws / "bad_scores.csv";
    atomic_write_file(bad, "image_id,method,raw,normalized\nimg,lapv,notanumber,\n");
    const RunResult r = run_cli("--quiet cutoff --scores " + bad.string() + " --predictions " +
                                (ws / "predictions.csv").string() +
                                " --methods lapv --out " + (ws / "c.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("ParseError") != std::string::npos);
}

TEST_CASE("full pipeline: score, cutoff, filter, report") {
    const fs::path ws = workspace();
    const fs::path scores = ws / "pipeline_scores.csv";
    const fs::path cutoffs = ws / "cutoffs.json";
    const fs::path subset = ws / "subset";

    CHECK(run_cli("--quiet --jobs 4 score --images " + (ws / "images").string() +
                  " --methods lapv,lapm,wavs --out " + scores.string())
              .exit_code == 0);
    CHECK(run_cli("--quiet cutoff --scores " + scores.string() + " --predictions " +
                  (ws / "predictions.csv").string() + " --methods lapv,lapm,wavs --out " +
                  cutoffs.string() + " --density-out " + (ws / "density").string())
              .exit_code == 0);
    CHECK(fs::exists(ws / "density" / "lapv_correct.json"));

    CHECK(run_cli("--quiet filter --dataset " + (ws / "dataset.csv").string() + " --scores " +
                  scores.string() + " --cutoffs " + cutoffs.string() + " --out " +
                  subset.string())
              .exit_code == 0);
    CHECK(fs::exists(subset / "manifest.json"));
    CHECK(fs::exists(subset / "votes.csv"));

    // the curated subset keeps mostly sharp images
    const SubsetManifest manifest = manifest_from_json(read_file(subset / "manifest.json"));
    size_t sharp = 0;
    for (const std::string& id : manifest.image_ids)
        if (std::stoi(id.substr(2)) < 30) ++sharp;
    CHECK(manifest.image_ids.size() > 0);
    CHECK(sharp >= manifest.image_ids.size() * 9 / 10);

    const RunResult report = run_cli("report --cutoffs " + cutoffs.string() + " --subset " +
                                     subset.string() + " --json " + (ws / "summary.json").string());
    CHECK(report.exit_code == 0);
    CHECK(report.output.find("Cut-off points:") != std::string::npos);
    CHECK(report.output.find("accepted") != std::string::npos);
    CHECK(fs::exists(ws / "summary.json"));

    // each rejection needs a majority of bad votes, so the veto sum covers
    // the rejected count
    size_t veto_total = 0, rejected = 0;
    {
        std::istringstream out(report.output);
        std::string line;
        while (std::getline(out, line)) {
            const auto pos = line.find("veto sanity: ");
            if (pos == std::string::npos) continue;
            std::istringstream fields(line.substr(pos + 13));
            std::string word;
            fields >> veto_total >> word >> word >> word >> rejected;
        }
    }
    CHECK(rejected > 0);
    CHECK(veto_total >= rejected);
}

TEST_CASE("score accepts a dataset manifest instead of a directory") {
    const fs::path ws = workspace();
    const fs::path out = ws / "scores_by_manifest.csv";
    const RunResult r = run_cli("--quiet score --dataset " + (ws / "dataset.csv").string() +
                                " --methods lapm --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(score_table_from_csv(read_file(out)).size() == 60);
}

TEST_CASE("brisque scoring through the CLI with the fixture model") {
    const fs::path ws = workspace();
    const fs::path out = ws / "scores_brisque.csv";
    const std::string model = std::string(TEST_DATA_DIR) + "/brisque_svr_fixture.json";
    const RunResult r = run_cli("--quiet score --images " + (ws / "images").string() +
                                " --methods brisque --brisque-model " + model + " --out " +
                                out.string());
    CHECK(r.exit_code == 0);
    CHECK(score_table_from_csv(read_file(out)).size() == 60);

    // requesting brisque without a model is a validation error
    CHECK(run_cli("--quiet score --images " + (ws / "images").string() +
                  " --methods brisque --out " + (ws / "x.csv").string())
              .exit_code == 1);
}

TEST_CASE("bench and select run end to end") {
    const fs::path ws = workspace();
    // square samples for the rotation protocol
    const fs::path samples = ws / "bench_samples";
    fs::create_directories(samples);
    for (uint64_t s = 0; s < 2; ++s)
        save_image_png(testsupport::textured_photo(96, 96, 600 + s),
                       samples / ("sample" + std::to_string(s) + ".png"));

    const fs::path bench_out = ws / "bench";
    CHECK(run_cli("--quiet bench --samples " + samples.string() + " --methods lapv,lapm,wavs" +
                  " --out " + bench_out.string())
              .exit_code == 0);
    CHECK(fs::exists(bench_out / "report.csv"));
    CHECK(fs::exists(bench_out / "report.json"));

    CHECK(run_cli("--quiet select --report " + (bench_out / "report.json").string() +
                  " --out " + (ws / "selection.json").string())
              .exit_code == 0);
    CHECK(read_file(ws / "selection.json").find("\"ranked\"") != std::string::npos);

    // flags override the config-backed criteria
    CHECK(run_cli("--quiet select --report " + (bench_out / "report.json").string() +
                  " --out " + (ws / "selection1.json").string() +
                  " --count 1 --statistic pcc --min-blur 0.2")
              .exit_code == 0);
    CHECK(read_file(ws / "selection1.json").find("\"statistic\": \"pcc\"") != std::string::npos);
}

TEST_CASE("subset modes and seed handling") {
    const fs::path ws = workspace();
    const fs::path scores = ws / "pipeline_scores.csv";
    if (!fs::exists(scores)) {
        REQUIRE(run_cli("--quiet score --images " + (ws / "images").string() +
                        " --methods lapv,lapm,wavs --out " + scores.string())
                    .exit_code == 0);
    }

    const fs::path matched = ws / "matched";
    CHECK(run_cli("--quiet --seed 5 subset --mode matched --dataset " +
                  (ws / "dataset.csv").string() + " --n 20 --out " + matched.string())
              .exit_code == 0);
    CHECK(fs::exists(matched / "matched_random.manifest.json"));
    const SubsetManifest m = manifest_from_json(read_file(matched / "matched_random.manifest.json"));
    CHECK(m.image_ids.size() == 20);
    CHECK(m.recipe.seed == 5);

    const fs::path series = ws / "series";
    CHECK(run_cli("--quiet --seed 5 subset --mode percent-series --dataset " +
                  (ws / "dataset.csv").string() + " --scores " + scores.string() +
                  " --methods lapv,lapm,wavs --percents 0,20 --n 20 --out " + series.string())
              .exit_code == 0);
    CHECK(fs::exists(series / "percent_removed_0.manifest.json"));
    CHECK(fs::exists(series / "percent_removed_20.manifest.json"));

    // QUALGATE_SEED env fallback reproduces the --seed run
    const fs::path env_out = ws / "matched_env";
    const std::string cmd = "QUALGATE_SEED=5 " + std::string(QUALGATE_BIN) +
                            " --quiet subset --mode matched --dataset " +
                            (ws / "dataset.csv").string() + " --n 20 --out " + env_out.string();
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(read_file(env_out / "matched_random.manifest.json") ==
          read_file(matched / "matched_random.manifest.json"));
}

TEST_CASE("report lists absent artifacts and exits nonzero") {
    const RunResult r = run_cli("report --cutoffs /nonexistent/cutoffs.json");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("ABSENT") != std::string::npos);
}

TEST_CASE("invalid config is a validation error") {
    const fs::path bad = fs::temp_directory_path() / "qualgate_bad_config.json";
    atomic_write_file(bad, "{broken");
    const RunResult r = run_cli("--config " + bad.string() + " report");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("InvalidParam") != std::string::npos);
}
