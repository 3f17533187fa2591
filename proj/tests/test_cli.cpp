// CLI behaviour through the in-process entry point: output artifacts,
// exit codes and round-trips of emitted JSON.

#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "ontic/cli.hpp"

using namespace ontic;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "ontic_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("helstrom prints the bound under a metadata header") {
    const auto zero = run_cli({"helstrom", "--overlap2", "0"});
    CHECK(zero.code == 0);
    CHECK(zero.out.find("# ontic") == 0);
    CHECK(zero.out.find("\n0\n") != std::string::npos);

    const auto half = run_cli({"helstrom", "--overlap2", "0.5"});
    CHECK(half.out.find("0.14644660940672") != std::string::npos);
}

TEST_CASE("usage errors exit 1 with machine-readable JSON on stderr") {
    const auto r = run_cli({"helstrom", "--bogus"});
    CHECK(r.code == 1);
    const auto j = json::parse(r.err);
    CHECK(j.at("error") == "usage");
}

TEST_CASE("validation errors exit 1 with the error code") {
    const auto r = run_cli({"verify", "--model", "/nonexistent/model.json"});
    CHECK(r.code == 1);
    const auto j = json::parse(r.err);
    CHECK(j.at("error") == "file_not_found");
}

TEST_CASE("antidistinguish emits the measurement with residual and method") {
    const auto r = run_cli({"antidistinguish", "--overlap2", "0.5"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("n") == 2);
    CHECK(j.at("method") == "explicit_half_overlap");
    CHECK(j.at("residual").get<double>() <= 1e-12);
    CHECK(j.at("meta").at("tool") == "ontic");
    // The emitted measurement is accepted by the loader unchanged.
    const auto meas = measurement_from_json(j);
    CHECK(meas.outcome_count() == 4);
}

TEST_CASE("antidistinguish search mode reports the copy count") {
    const auto r = run_cli({"antidistinguish", "--overlap2", "0.25", "--method", "search",
                            "--n", "2", "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("method") == "numerical_search");
    CHECK(j.at("residual").get<double>() <= 1e-8);
}

TEST_CASE("model zoo round-trips through verify with documented exit codes") {
    const auto dir = temp_dir();
    const auto zoo = run_cli({"model-zoo", "--out-dir", dir.string()});
    REQUIRE(zoo.code == 0);
    const auto manifest = json::parse(zoo.out);
    CHECK(manifest.at("files").size() >= 9);

    const auto ok = run_cli({"verify", "--model", (dir / "psi_ontic.json").string(),
                             "--theorem", "1"});
    CHECK(ok.code == 0);
    CHECK(json::parse(ok.out).at("status") == "overlap_zero");

    const auto hyp = run_cli({"verify", "--model", (dir / "overlapping_toy.json").string(),
                              "--theorem", "1"});
    CHECK(hyp.code == 2);
    CHECK(json::parse(hyp.out).at("status") == "hypotheses_not_met");

    const auto wit = run_cli(
        {"verify", "--model", (dir / "overlapping_exact_zeros.json").string(), "--theorem",
         "1", "--zero-tol", "0"});
    CHECK(wit.code == 3);
    CHECK(json::parse(wit.out).at("status") == "witness_found");

    const auto t2 = run_cli({"verify", "--model",
                             (dir / "measurement_dependent.json").string(), "--theorem", "2"});
    CHECK(t2.code == 2);
    const auto t2j = json::parse(t2.out);
    CHECK(t2j.at("status") == "hypotheses_not_met");
    CHECK(t2j.at("theorem1").at("status") == "overlap_zero");

    const auto local = run_cli({"verify", "--model",
                                (dir / "diagonal_correlated.json").string(), "--local",
                                "--zero-tol", "0"});
    CHECK(local.code == 3);

    // A zero tolerance loose enough to drain the argument of force.
    const auto loose = run_cli({"verify", "--model",
                                (dir / "overlapping_toy.json").string(), "--zero-tol",
                                "0.5"});
    CHECK(loose.code == 4);
    CHECK(json::parse(loose.out).at("status") == "inconclusive");

    // Quantum cross-check path: the zoo measurement annihilates the recorded
    // joint states.
    const auto cross = run_cli({"verify", "--model", (dir / "psi_ontic.json").string(),
                                "--measurement", (dir / "half_overlap_measurement.json").string()});
    CHECK(cross.code == 0);
    CHECK(json::parse(cross.out).at("quantum_cross_check").at("pass") == true);
}

TEST_CASE("maxoverlap emits an ordered CSV table") {
    const auto r = run_cli({"maxoverlap", "--epsilon-grid", "0,0.05", "--lambda-count", "4",
                            "--rounds", "12"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);  // comment
    std::getline(lines, line);  // header
    CHECK(line == "epsilon,overlap,feasible,lambda_count,rounds");
    std::getline(lines, line);
    const double first = std::stod(line.substr(line.find(',') + 1));
    std::getline(lines, line);
    const double second = std::stod(line.substr(line.find(',') + 1));
    CHECK(first <= 1e-9);
    CHECK(second >= first);
}

TEST_CASE("simulate runs in quantum mode and honors the format flag") {
    const auto r = run_cli({"simulate", "--trials", "20000", "--seed", "9"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("trials") == 20000);
    CHECK(j.at("forbidden_frequency").get<double>() <= 1e-4);
    CHECK(j.at("rng").get<std::string>().find("xoshiro256**") == 0);

    const auto csv = run_cli({"simulate", "--trials", "5000", "--seed", "9", "--format",
                              "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find("k,m,count,predicted,residual") != std::string::npos);
}

TEST_CASE("simulate accepts a model file and a correlation spec") {
    const auto dir = temp_dir();
    run_cli({"model-zoo", "--out-dir", dir.string()});
    const auto r = run_cli({"simulate", "--model", (dir / "shared_randomness.json").string(),
                            "--trials", "20000", "--seed", "3", "--correlation",
                            "shared:1.0"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("correlation") == "shared_randomness");
    CHECK(j.at("forbidden_count") == 0);
}

TEST_CASE("outputs can be redirected to files") {
    const auto dir = temp_dir();
    const auto path = (dir / "bound.txt").string();
    const auto r = run_cli({"helstrom", "--overlap2", "0.5", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("0.14644660940672") != std::string::npos);
}

TEST_CASE("help is printed on request") {
    const auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("antidistinguish") != std::string::npos);
    CHECK(r.out.find("model-zoo") != std::string::npos);
}

TEST_CASE("state files written by the zoo feed every pair-taking command") {
    const auto dir = temp_dir();
    run_cli({"model-zoo", "--out-dir", dir.string()});
    const auto psi = (dir / "psi.json").string();
    const auto phi = (dir / "phi.json").string();

    const auto hel = run_cli({"helstrom", "--psi", psi, "--phi", phi});
    CHECK(hel.code == 0);
    CHECK(hel.out.find("0.14644660940672") != std::string::npos);

    const auto anti = run_cli({"antidistinguish", "--psi", psi, "--phi", phi});
    CHECK(anti.code == 0);
    CHECK(json::parse(anti.out).at("residual").get<double>() <= 1e-12);

    // A CLI-emitted measurement is accepted back by the simulate input path.
    const auto meas_path = (dir / "half_overlap_measurement.json").string();
    const auto sim = run_cli({"simulate", "--psi", psi, "--phi", phi, "--measurement",
                              meas_path, "--trials", "5000", "--seed", "2"});
    CHECK(sim.code == 0);
    CHECK(json::parse(sim.out).at("forbidden_frequency").get<double>() <= 1e-4);

    const auto missing_phi = run_cli({"helstrom", "--psi", psi});
    CHECK(missing_phi.code == 1);
    CHECK(json::parse(missing_phi.err).at("error") == "state_pair");
}

TEST_CASE("maxoverlap JSON format carries the rows and metadata") {
    const auto r = run_cli({"maxoverlap", "--epsilon-grid", "0", "--lambda-count", "4",
                            "--rounds", "8", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.at("meta").at("tool") == "ontic");
    REQUIRE(j.at("rows").size() == 1);
    CHECK(j.at("rows")[0].at("overlap").get<double>() <= 1e-9);
    CHECK(j.at("rows")[0].at("feasible") == true);
}
