#include "doctest.h"
#include "dst/param_store.hpp"

#include <bit>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dst/errors.hpp"
#include "dst/rng.hpp"

using namespace dst;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("dst_test_" + name)).string();
}

ParamLayout two_layer_layout() {
    return ParamLayout({{"layer0.weight", "weight", 0, 0, 2},
                        {"layer0.bias", "bias", 0, 2, 1},
                        {"layer1.weight", "weight", 1, 3, 1}});
}

ParamVector make_params(std::vector<float> values, ParamLayout layout) {
    ParamVector p;
    p.values = std::move(values);
    p.layout = std::move(layout);
    return p;
}

}  // namespace

TEST_CASE("layout rejects gaps, overlaps and duplicate names") {
    CHECK_THROWS(ParamLayout({{"a", "weight", 0, 1, 2}}));               // gap at 0
    CHECK_THROWS(ParamLayout({{"a", "weight", 0, 0, 2}, {"b", "bias", 0, 1, 1}}));
    CHECK_THROWS(ParamLayout({{"a", "weight", 0, 0, 2}, {"a", "bias", 0, 2, 1}}));
    const ParamLayout ok = two_layer_layout();
    CHECK(ok.size() == 4);
    CHECK(ok.group_at(2).name == "layer0.bias");
}

TEST_CASE("checkpoint round-trips bitwise") {
    const auto params = make_params({1.0f, 0.0f, -2.5f, 3e-8f}, two_layer_layout());
    const std::string path = temp_path("roundtrip.dstc");
    save_checkpoint(params, path, 0xdeadbeefULL);
    const LoadedCheckpoint loaded = load_checkpoint(path);
    CHECK(loaded.params.values == params.values);
    CHECK(loaded.seed_checksum == 0xdeadbeefULL);
    CHECK(loaded.params.layout.groups().size() == 3);
    CHECK(loaded.params.layout.groups()[1].module_kind == "bias");
    CHECK(loaded.params.layout.groups()[1].layer_index == 0);
    std::remove(path.c_str());
}

TEST_CASE("checkpoint round-trip of random vectors is bitwise") {
    Xoshiro256 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<float> values(37);
        for (auto& v : values) v = static_cast<float>(rng.uniform(-10.0, 10.0));
        ParamLayout layout({{"g", "weight", 0, 0, 37}});
        const auto params = make_params(values, layout);
        const std::string path = temp_path("rt_rand.dstc");
        save_checkpoint(params, path);
        CHECK(load_checkpoint(path).params.values == values);
        std::remove(path.c_str());
    }
}

TEST_CASE("saving NaN refuses and names the group") {
    auto params = make_params({1.0f, std::nanf(""), 0.0f, 0.0f}, two_layer_layout());
    const std::string path = temp_path("nan.dstc");
    try {
        save_checkpoint(params, path);
        FAIL("expected refusal");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("layer0.weight") != std::string::npos);
    }
}

TEST_CASE("empty layout round-trips as n=0") {
    const ParamVector params;  // empty layout, no values
    const std::string path = temp_path("empty.dstc");
    save_checkpoint(params, path);
    const auto loaded = load_checkpoint(path);
    CHECK(loaded.params.size() == 0);
    CHECK(loaded.params.layout.empty());
    std::remove(path.c_str());
}

TEST_CASE("load rejects bad magic, bad version and truncation") {
    const std::string path = temp_path("badfile.dstc");
    {
        std::ofstream f(path, std::ios::binary);
        f << "XXXXjunk";
    }
    CHECK_THROWS_AS(load_checkpoint(path), DataError);

    // valid file, then truncate one float away
    const auto params = make_params({1.0f, 2.0f, 3.0f, 4.0f}, two_layer_layout());
    save_checkpoint(params, path);
    const auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size - 4);
    CHECK_THROWS_AS(load_checkpoint(path), DataError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_checkpoint(path), IoError);  // missing file
}

TEST_CASE("fnv1a64 matches the reference constants") {
    CHECK(checksum({}) == 0xcbf29ce484222325ULL);  // offset basis
    const std::vector<float> vec = {1.0f, 0.0f, -2.5f, 3e-8f};
    CHECK(checksum(vec) == 0xf38bf1844a1d986bULL);
    CHECK(checksum(vec) == checksum(vec));
}

TEST_CASE("one-bit difference changes the checksum") {
    const std::vector<float> a = {1.0f};
    const uint32_t bumped_bits = std::bit_cast<uint32_t>(1.0f) + 1;
    const std::vector<float> b = {std::bit_cast<float>(bumped_bits)};
    CHECK(checksum(a) == 0x4b72477f9c5c2f98ULL);
    CHECK(checksum(b) == 0xab77f17746270529ULL);
    CHECK(checksum(a) != checksum(b));
}

TEST_CASE("subset_indices is bitwise and sorted") {
    const ParamLayout layout({{"g", "weight", 0, 0, 4}});
    const SeedSnapshot seed(make_params({0.0f, 0.0f, 0.0f, 0.0f}, layout));

    CHECK(subset_indices(make_params({0.0f, 0.0f, 0.0f, 0.0f}, layout), seed).empty());
    CHECK(subset_indices(make_params({0.4f, 0.0f, 0.3f, 0.0f}, layout), seed) ==
          std::vector<size_t>{0, 2});
    CHECK(subset_indices(make_params({0.0f, 0.0f, 0.0f, 1e-30f}, layout), seed) ==
          std::vector<size_t>{3});
    // negative zero differs bitwise from positive zero
    CHECK(subset_indices(make_params({-0.0f, 0.0f, 0.0f, 0.0f}, layout), seed) ==
          std::vector<size_t>{0});

    const ParamLayout other({{"g", "weight", 0, 0, 3}});
    CHECK_THROWS(subset_indices(make_params({0.0f, 0.0f, 0.0f}, other), seed));
}

TEST_CASE("subset size is invariant under consistent group reordering") {
    Xoshiro256 rng(17);
    std::vector<float> seed_vals(6), model_vals(6);
    for (size_t i = 0; i < 6; ++i) {
        seed_vals[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
        model_vals[i] = rng.uniform() < 0.5 ? seed_vals[i]
                                            : static_cast<float>(rng.uniform(-1.0, 1.0));
    }
    const ParamLayout fwd({{"a", "weight", 0, 0, 4}, {"b", "bias", 0, 4, 2}});
    const SeedSnapshot seed_fwd(make_params(seed_vals, fwd));
    const auto count_fwd = subset_indices(make_params(model_vals, fwd), seed_fwd).size();

    // swap group order, remapping offsets (b first, then a)
    std::vector<float> seed_swapped, model_swapped;
    for (size_t i = 4; i < 6; ++i) seed_swapped.push_back(seed_vals[i]);
    for (size_t i = 0; i < 4; ++i) seed_swapped.push_back(seed_vals[i]);
    for (size_t i = 4; i < 6; ++i) model_swapped.push_back(model_vals[i]);
    for (size_t i = 0; i < 4; ++i) model_swapped.push_back(model_vals[i]);
    const ParamLayout rev({{"b", "bias", 0, 0, 2}, {"a", "weight", 0, 2, 4}});
    const SeedSnapshot seed_rev(make_params(seed_swapped, rev));
    const auto count_rev = subset_indices(make_params(model_swapped, rev), seed_rev).size();
    CHECK(count_fwd == count_rev);
}

TEST_CASE("seed snapshot checksum guards identity") {
    const auto params = make_params({0.5f, -0.25f, 8.0f, 0.0f}, two_layer_layout());
    const SeedSnapshot snap(params);
    CHECK(snap.checksum() == checksum(params.values));
    CHECK(snap.size() == 4);
}
