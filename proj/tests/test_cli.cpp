#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "support/synth.hpp"
#include "svmap/dataset.hpp"
#include "svmap/distributed.hpp"
#include "svmap/solver.hpp"

using namespace svmap;
using namespace svmap::testsup;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& dir) {
    std::string out_path = dir + "/cli_stdout.txt";
    std::string err_path = dir + "/cli_stderr.txt";
    std::string cmd = std::string(SVMAP_CLI_PATH) + " " + args + " >" + out_path + " 2>" +
                      err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

}  // namespace

TEST_CASE("cli train writes model and history artifacts") {
    const std::string dir = make_temp_dir("cli_train");
    Dataset letters = synth_letters(220, 5);
    write_csv(letters, dir + "/letters.csv", true);

    RunResult r = run_cli("train --input " + dir + "/letters.csv --format csv"
                          " --label-column 0 --positive A --L 4 --seed 7 --out " + dir + "/run",
                          dir);
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);
    CHECK(file_exists(dir + "/run/model.svmap"));
    CHECK(file_exists(dir + "/run/history.jsonl"));
    CHECK(file_exists(dir + "/run/history.csv"));
    CHECK(file_exists(dir + "/run/summary.json"));
    CHECK(slurp(dir + "/run/summary.json").find("risk_increases") != std::string::npos);
}

TEST_CASE("cli train on a missing input names the path and exits 2") {
    const std::string dir = make_temp_dir("cli_missing");
    RunResult r = run_cli("train --input " + dir + "/nope.csv --format csv", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find(dir + "/nope.csv") != std::string::npos);
}

TEST_CASE("cli exit codes: usage 1, data 2, training 3") {
    const std::string dir = make_temp_dir("cli_codes");

    RunResult usage = run_cli("train --no-such-flag", dir);
    CHECK(usage.exit_code == 1);

    std::ofstream bad(dir + "/bad.sparse");
    bad << "+1 3:1 2:1\n";
    bad.close();
    RunResult data = run_cli("train --input " + dir + "/bad.sparse", dir);
    CHECK(data.exit_code == 2);

    std::ofstream single(dir + "/single.sparse");
    single << "+1 1:1\n+1 1:2\n+1 1:3\n";
    single.close();
    RunResult training = run_cli("train --input " + dir + "/single.sparse --L 1", dir);
    CHECK(training.exit_code == 3);
}

TEST_CASE("cli L=1 single-iteration train + predict reproduces train_svm exactly") {
    const std::string dir = make_temp_dir("cli_l1");
    Dataset d = random_binary_blobs(50, 3, 17);
    write_sparse(d, dir + "/data.sparse");

    RunResult r = run_cli("train --input " + dir + "/data.sparse --L 1 --max-iterations 1"
                          " --seed 3 --out " + dir + "/run", dir);
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    RunResult p = run_cli("predict --model " + dir + "/run/model.svmap --input " + dir +
                          "/data.sparse", dir);
    REQUIRE(p.exit_code == 0);

    TrainConfig tc;
    SvmModel reference = train_svm(d, tc);
    std::string expected;
    for (const Sample& s : d.samples)
        expected += std::to_string(predict(reference, s.features)) + "\n";
    CHECK(p.out == expected);
}

TEST_CASE("cli predict: file round-trip matches in-memory predictions") {
    const std::string dir = make_temp_dir("cli_predict");
    Dataset d = random_binary_blobs(40, 2, 9);
    write_sparse(d, dir + "/data.sparse");

    TrainConfig tc;
    tc.kernel = {KernelKind::rbf, 0.5};
    SvmModel m = train_svm(d, tc);
    save_model(m, dir + "/model.svmap");

    RunResult p = run_cli("predict --model " + dir + "/model.svmap --input " + dir +
                          "/data.sparse --decision-values", dir);
    REQUIRE(p.exit_code == 0);

    std::istringstream lines(p.out);
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        REQUIRE(i < d.size());
        std::istringstream ls(line);
        int label;
        double f;
        ls >> label >> f;
        CHECK(label == predict(m, d.samples[i].features));
        CHECK(f == decision_value(m, d.samples[i].features));
        ++i;
    }
    CHECK(i == d.size());
}

TEST_CASE("cli predict: empty input gives empty output, exit 0") {
    const std::string dir = make_temp_dir("cli_empty");
    std::ofstream(dir + "/empty.sparse").close();

    Dataset d = random_binary_blobs(10, 2, 2);
    save_model(train_svm(d, TrainConfig{}), dir + "/model.svmap");

    RunResult p = run_cli("predict --model " + dir + "/model.svmap --input " + dir +
                          "/empty.sparse", dir);
    CHECK(p.exit_code == 0);
    CHECK(p.out.empty());
}

TEST_CASE("cli predict: corrupted model file exits nonzero") {
    const std::string dir = make_temp_dir("cli_corrupt");
    std::ofstream broken(dir + "/model.svmap");
    broken << "not a model\n";
    broken.close();
    std::ofstream data(dir + "/x.sparse");
    data << "+1 1:1\n";
    data.close();

    RunResult p = run_cli("predict --model " + dir + "/model.svmap --input " + dir + "/x.sparse",
                          dir);
    CHECK(p.exit_code == 2);
}

TEST_CASE("cli cv emits one row per iteration and is seed-deterministic") {
    const std::string dir = make_temp_dir("cli_cv");
    Dataset d = random_binary_blobs(80, 2, 21, 2.5);
    write_sparse(d, dir + "/data.sparse");

    std::string args = "cv --input " + dir + "/data.sparse --L 2 --folds 3"
                       " --max-iterations 4 --seed 11 --out ";
    RunResult a = run_cli(args + dir + "/cv_a", dir);
    CAPTURE(a.err);
    REQUIRE(a.exit_code == 0);
    RunResult b = run_cli(args + dir + "/cv_b", dir);
    REQUIRE(b.exit_code == 0);

    std::string report_a = slurp(dir + "/cv_a/cv_report.csv");
    std::string report_b = slurp(dir + "/cv_b/cv_report.csv");
    CHECK(report_a == report_b);

    std::istringstream lines(report_a);
    std::string line;
    std::size_t rows = 0;
    std::getline(lines, line);
    CHECK(line == "iter,loss_mean,loss_mean_plus_sigma,loss_mean_minus_sigma,mean_sv_count");
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);  // one per iteration
}

TEST_CASE("cli bench: node list rows, baseline speedup exactly 1") {
    const std::string dir = make_temp_dir("cli_bench");
    Dataset d = random_binary_blobs(60, 2, 33, 2.5);
    write_sparse(d, dir + "/data.sparse");

    RunResult r = run_cli("bench --input " + dir + "/data.sparse --nodes 1,2"
                          " --repeats 1 --max-iterations 2 --seed 5 --out " + dir + "/bench",
                          dir);
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    std::istringstream lines(slurp(dir + "/bench/speedup.csv"));
    std::string header, row1, row2;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(header == "L,wall_time_s,speedup");
    CHECK(row1.rfind("1,", 0) == 0);
    CHECK(row1.substr(row1.rfind(',') + 1) == "1");
    CHECK(row2.rfind("2,", 0) == 0);
}

TEST_CASE("cli config file: flags override config, config overrides defaults") {
    const std::string dir = make_temp_dir("cli_config");
    Dataset d = random_binary_blobs(30, 2, 3);
    write_sparse(d, dir + "/data.sparse");

    std::ofstream cfg(dir + "/cfg.json");
    cfg << R"({"C": 5.0, "L": 2, "max-iterations": 1})";
    cfg.close();

    RunResult with_flag = run_cli("train --input " + dir + "/data.sparse --config " + dir +
                                  "/cfg.json --C 2.0 --out " + dir + "/a", dir);
    REQUIRE(with_flag.exit_code == 0);
    CHECK(slurp(dir + "/a/summary.json").find("\"C\": 2.0") != std::string::npos);

    RunResult from_cfg = run_cli("train --input " + dir + "/data.sparse --config " + dir +
                                 "/cfg.json --out " + dir + "/b", dir);
    REQUIRE(from_cfg.exit_code == 0);
    CHECK(slurp(dir + "/b/summary.json").find("\"C\": 5.0") != std::string::npos);

    std::ofstream bad(dir + "/bad.json");
    bad << R"({"no-such-key": 1})";
    bad.close();
    RunResult unknown = run_cli("train --input " + dir + "/data.sparse --config " + dir +
                                "/bad.json", dir);
    CHECK(unknown.exit_code == 1);
}

TEST_CASE("cli inspect describes datasets and models") {
    const std::string dir = make_temp_dir("cli_inspect");
    Dataset letters = synth_letters(60, 12);
    write_csv(letters, dir + "/letters.csv", true);

    RunResult d = run_cli("inspect --input " + dir + "/letters.csv --format csv"
                          " --label-column 0", dir);
    REQUIRE(d.exit_code == 0);
    CHECK(d.out.find("samples: 60") != std::string::npos);
    CHECK(d.out.find("dim: 16") != std::string::npos);

    Dataset blobs = random_binary_blobs(20, 2, 2);
    save_model(train_svm(blobs, TrainConfig{}), dir + "/model.svmap");
    RunResult m = run_cli("inspect --model " + dir + "/model.svmap", dir);
    REQUIRE(m.exit_code == 0);
    CHECK(m.out.find("kernel: linear") != std::string::npos);
    CHECK(m.out.find("support vectors:") != std::string::npos);
}

TEST_CASE("cli train with --scale stores ranges so predict is consistent") {
    const std::string dir = make_temp_dir("cli_scale");
    Dataset letters = binarize(synth_letters(150, 8), "A");
    write_sparse(letters, dir + "/data.sparse");

    RunResult r = run_cli("train --input " + dir + "/data.sparse --scale --L 2 --seed 1"
                          " --out " + dir + "/run", dir);
    CAPTURE(r.err);
    REQUIRE(r.exit_code == 0);

    RunResult p = run_cli("predict --model " + dir + "/run/model.svmap --input " + dir +
                          "/data.sparse", dir);
    REQUIRE(p.exit_code == 0);

    // reproduce in-library: scaled training, scaled prediction
    ScaleRange range = fit_scale(letters);
    Dataset scaled = apply_scale(letters, range);
    DistributedConfig dc;
    dc.L = 2;
    dc.seed = 1;
    TrainRun run = train_distributed(scaled, dc);
    std::string expected;
    for (const Sample& s : scaled.samples)
        expected += std::to_string(predict(run.final_model, s.features)) + "\n";
    CHECK(p.out == expected);
}
