#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "dst/param_store.hpp"
#include "dst/subset_delta.hpp"

#ifndef DSTCTL_PATH
#error "DSTCTL_PATH must be defined by the build"
#endif

using namespace dst;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CmdResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cmd.log";
    const std::string cmd =
        std::string(DSTCTL_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

fs::path make_workdir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("dst_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_config(const fs::path& path, const std::string& extra) {
    std::ofstream f(path);
    f << "model.widths = 8,16,4\n"
         "model.init_seed = 3\n"
         "task.kind = teacher_regression\n"
         "task.samples = 256\n"
         "task.noise = 0.02\n"
         "task.seed = 11\n"
         "task.teacher_hidden = 12\n"
         "opt.kind = sgd\n"
         "opt.lr = 0.05\n"
         "train.steps = 60\n"
         "train.batch_size = 8\n"
         "train.checkpoint_interval = 20\n"
      << extra;
}

std::vector<char> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("pretrain then finetune produces consistent artifacts") {
    const auto dir = make_workdir("pipeline");
    write_config(dir / "run.cfg",
                 "task.shift_fraction = 0.1\n"
                 "task.shift_scale = 0.5\n"
                 "train.method = dst\n"
                 "dst.epsilon = 0.05\n");

    auto r = run_cli("pretrain --config " + (dir / "run.cfg").string() + " --out " +
                         (dir / "out").string() + " --set opt.kind=adam --set opt.lr=0.01",
                     dir);
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(dir / "out/seed.dstc"));

    // determinism: a second pretrain writes identical bytes
    auto r2 = run_cli("pretrain --config " + (dir / "run.cfg").string() + " --out " +
                          (dir / "out2").string() + " --set opt.kind=adam --set opt.lr=0.01",
                      dir);
    CHECK(r2.exit_code == 0);
    CHECK(read_bytes(dir / "out/seed.dstc") == read_bytes(dir / "out2/seed.dstc"));

    auto f = run_cli("finetune --config " + (dir / "run.cfg").string() + " --seed " +
                         (dir / "out/seed.dstc").string() + " --out " +
                         (dir / "run1").string(),
                     dir);
    CHECK(f.exit_code == 0);
    for (const char* name : {"final.dstc", "delta.dstd", "metrics.csv", "records.csv"})
        CHECK(fs::exists(dir / "run1" / name));

    // delta entry count equals the subset size logged at the final checkpoint
    const auto delta = load_delta((dir / "run1/delta.dstd").string());
    std::ifstream records(dir / "run1/records.csv");
    std::string line;
    std::getline(records, line);  // header
    std::string last_step;
    size_t logged = 0;
    while (std::getline(records, line)) {
        std::stringstream ss(line);
        std::string step, silo, size, budget, selected;
        std::getline(ss, step, ',');
        std::getline(ss, silo, ',');
        std::getline(ss, size, ',');
        std::getline(ss, budget, ',');
        std::getline(ss, selected, ',');
        if (step != last_step) {
            logged = 0;
            last_step = step;
        }
        logged += std::stoul(selected);
    }
    CHECK(delta.entries.size() == logged);
}

TEST_CASE("diff and apply round-trip through the CLI") {
    const auto dir = make_workdir("roundtrip");
    write_config(dir / "run.cfg",
                 "task.shift_fraction = 0.1\n"
                 "task.shift_scale = 0.5\n"
                 "train.method = dst\n"
                 "dst.epsilon = 0.05\n");
    REQUIRE(run_cli("pretrain --config " + (dir / "run.cfg").string() + " --out " +
                        (dir / "out").string(),
                    dir)
                .exit_code == 0);
    REQUIRE(run_cli("finetune --config " + (dir / "run.cfg").string() + " --seed " +
                        (dir / "out/seed.dstc").string() + " --out " + (dir / "run").string(),
                    dir)
                .exit_code == 0);

    auto d = run_cli("diff --seed " + (dir / "out/seed.dstc").string() + " --model " +
                         (dir / "run/final.dstc").string() + " --out " +
                         (dir / "re.dstd").string(),
                     dir);
    CHECK(d.exit_code == 0);
    auto a = run_cli("apply --seed " + (dir / "out/seed.dstc").string() + " --delta " +
                         (dir / "re.dstd").string() + " --out " + (dir / "re.dstc").string(),
                     dir);
    CHECK(a.exit_code == 0);
    CHECK(read_bytes(dir / "re.dstc") == read_bytes(dir / "run/final.dstc"));

    // diff of identical files is empty
    auto e = run_cli("diff --seed " + (dir / "out/seed.dstc").string() + " --model " +
                         (dir / "out/seed.dstc").string() + " --out " +
                         (dir / "empty.dstd").string(),
                     dir);
    CHECK(e.exit_code == 0);
    CHECK(load_delta((dir / "empty.dstd").string()).entries.empty());

    // apply against the wrong seed refuses with exit 3 and both checksums
    auto wrong = run_cli("apply --seed " + (dir / "run/final.dstc").string() + " --delta " +
                             (dir / "re.dstd").string() + " --out " +
                             (dir / "bad.dstc").string(),
                         dir);
    CHECK(wrong.exit_code == 3);
    CHECK(wrong.output.find("checksum") != std::string::npos);
}

TEST_CASE("missing required key exits 2 and names the key") {
    const auto dir = make_workdir("missingkey");
    std::ofstream f(dir / "run.cfg");
    f << "model.widths = 8,16,4\n"
         "task.kind = teacher_regression\n"
         "opt.lr = 0.05\n"
         "train.steps = 10\n";  // opt.kind missing
    f.close();
    auto r = run_cli("pretrain --config " + (dir / "run.cfg").string() + " --out " +
                         (dir / "out").string(),
                     dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("opt.kind") != std::string::npos);
}

TEST_CASE("unknown config key exits 2") {
    const auto dir = make_workdir("unknownkey");
    write_config(dir / "run.cfg", "dst.bogus = 1\n");
    auto r = run_cli("pretrain --config " + (dir / "run.cfg").string() + " --out " +
                         (dir / "out").string(),
                     dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("dst.bogus") != std::string::npos);
}

TEST_CASE("epsilon out of range exits 2") {
    const auto dir = make_workdir("badeps");
    write_config(dir / "run.cfg",
                 "train.method = dst\n"
                 "dst.epsilon = 1.5\n");
    REQUIRE(run_cli("pretrain --config " + (dir / "run.cfg").string() + " --out " +
                        (dir / "out").string(),
                    dir)
                .exit_code == 0);
    auto r = run_cli("finetune --config " + (dir / "run.cfg").string() + " --seed " +
                         (dir / "out/seed.dstc").string() + " --out " + (dir / "x").string(),
                     dir);
    CHECK(r.exit_code == 2);
}

TEST_CASE("overlap command") {
    const auto dir = make_workdir("overlap");
    // build two deltas against the same tiny seed by hand
    ParamVector params;
    params.values = {0.0f, 0.0f, 0.0f, 0.0f};
    params.layout = ParamLayout({{"g", "weight", 0, 0, 4}});
    const SeedSnapshot seed(params);
    ParamVector m1 = params, m2 = params;
    m1.values[0] = 1.0f;
    m1.values[2] = 1.0f;
    m2.values[2] = 2.0f;
    m2.values[3] = 2.0f;
    save_delta(diff(seed, m1), (dir / "a.dstd").string());
    save_delta(diff(seed, m2), (dir / "b.dstd").string());

    auto single = run_cli("overlap " + (dir / "a.dstd").string(), dir);
    CHECK(single.exit_code == 0);
    CHECK(single.output.find("1.000000") != std::string::npos);

    auto pair = run_cli(
        "overlap " + (dir / "a.dstd").string() + " " + (dir / "b.dstd").string(), dir);
    CHECK(pair.exit_code == 0);
    CHECK(pair.output.find("0.500000") != std::string::npos);

    // mismatched model sizes exit 2
    ParamVector bigger;
    bigger.values = {0.0f, 0.0f, 0.0f, 0.0f, 0.0f};
    bigger.layout = ParamLayout({{"g", "weight", 0, 0, 5}});
    const SeedSnapshot seed2(bigger);
    auto m3 = bigger;
    m3.values[1] = 1.0f;
    save_delta(diff(seed2, m3), (dir / "c.dstd").string());
    auto bad = run_cli(
        "overlap " + (dir / "a.dstd").string() + " " + (dir / "c.dstd").string(), dir);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("bench validates repetitions") {
    const auto dir = make_workdir("bench");
    ParamVector params;
    params.values.assign(100, 1.0f);
    params.layout = ParamLayout({{"g", "weight", 0, 0, 100}});
    save_checkpoint(params, (dir / "seed.dstc").string());
    const SeedSnapshot seed(params);
    auto m = params;
    m.values[5] = 2.0f;
    save_delta(diff(seed, m), (dir / "d.dstd").string());

    auto bad = run_cli("bench --seed " + (dir / "seed.dstc").string() + " --reps 0 " +
                           (dir / "d.dstd").string(),
                       dir);
    CHECK(bad.exit_code == 2);

    auto ok = run_cli("bench --seed " + (dir / "seed.dstc").string() + " --reps 3 " +
                          (dir / "d.dstd").string(),
                      dir);
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("dense_apply_s") != std::string::npos);
}

TEST_CASE("corrupt checkpoint exits 3") {
    const auto dir = make_workdir("corrupt");
    std::ofstream f(dir / "junk.dstc", std::ios::binary);
    f << "XXXXnotacheckpoint";
    f.close();
    write_config(dir / "run.cfg", "train.method = full\n");
    auto r = run_cli("finetune --config " + (dir / "run.cfg").string() + " --seed " +
                         (dir / "junk.dstc").string() + " --out " + (dir / "x").string(),
                     dir);
    CHECK(r.exit_code == 3);
}
